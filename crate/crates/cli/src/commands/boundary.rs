//! `boundary`: separability line, optimal coupling and a Duan grid.

use std::path::PathBuf;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use qnet::scenarios::{
    duan_quantity, optimal_coupling, separability_boundary, three_mode_budget, BoundaryLine,
    OptimalCoupling, ThreeModeParams,
};

use super::write_csv;
use super::write_json;
use crate::format::g12;
use crate::grid::product;
use crate::{BoundaryArgs, Validation, EXIT_OK};

pub const HEADER: &str = "n_o,n_m,duan_direct,duan_budget,entangled";
const VARS: &[&str] = &["n_o", "n_m"];

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub params: ThreeModeParams,
    /// `(G_bs, G_sq)` of the physical drives.
    pub drives: (f64, f64),
    pub eta_e: Option<f64>,
    /// Set when `--eta-e` replaced the computed value for the line.
    pub eta_e_override: Option<f64>,
    pub line: Option<BoundaryLine>,
    pub degenerate: Option<bool>,
    pub g_opt: Option<OptimalCoupling>,
    pub g_opt_error: Option<String>,
    pub csv: PathBuf,
    pub error: Option<String>,
}

pub fn params(args: &BoundaryArgs) -> Result<ThreeModeParams> {
    let p = match (args.g_bs, args.g_sq) {
        (Some(bs), Some(sq)) => ThreeModeParams::from_drives(
            sq, bs, args.omega, args.kappa, args.gamma_m, args.n_o, args.n_m,
        )?,
        _ => ThreeModeParams {
            g_script: args.g_script,
            xi: args.xi,
            omega: args.omega,
            kappa: args.kappa,
            gamma_m: args.gamma_m,
            n_o: args.n_o,
            n_m: args.n_m,
        },
    };
    p.validate()?;
    Ok(p)
}

fn report_path(args: &BoundaryArgs) -> PathBuf {
    if let Some(r) = &args.report {
        return r.clone();
    }
    let p = args.out.with_extension("json");
    if p == args.out {
        args.out.with_extension("report.json")
    } else {
        p
    }
}

/// Report plus CSV rows; an `Err` in the outer result is a failure before
/// any report could be formed.
pub fn evaluate(args: &BoundaryArgs) -> Result<(BoundaryReport, Vec<String>, Option<anyhow::Error>)> {
    let p = params(args)?;
    let points = product(&args.grids, VARS)?;
    let occupancies: Vec<(f64, f64)> = points
        .iter()
        .map(|vals| {
            let (mut n_o, mut n_m) = (p.n_o, p.n_m);
            for (g, v) in args.grids.iter().zip(vals) {
                match g.var.as_str() {
                    "n_o" => n_o = *v,
                    _ => n_m = *v,
                }
            }
            (n_o, n_m)
        })
        .collect();
    if let Some(&(a, b)) = occupancies.iter().find(|(a, b)| !(*a >= 0.0 && *b >= 0.0)) {
        return Err(Validation(format!("occupancies must be non-negative, got ({a}, {b})")).into());
    }
    if let Some(e) = args.eta_e {
        if !e.is_finite() {
            return Err(Validation(format!("eta_e must be finite, got {e}")).into());
        }
    }

    let (g_opt, g_opt_error) = match optimal_coupling(p.kappa, p.omega.abs(), p.gamma_m) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut report = BoundaryReport {
        params: p,
        drives: p.drives(),
        eta_e: None,
        eta_e_override: args.eta_e,
        line: None,
        degenerate: None,
        g_opt,
        g_opt_error,
        csv: args.out.clone(),
        error: None,
    };
    let computed = match three_mode_budget(&p) {
        Ok(b) => b.eta_e,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok((report, Vec::new(), Some(e.into())));
        }
    };
    report.eta_e = Some(computed);
    match separability_boundary(p.xi, args.eta_e.unwrap_or(computed)) {
        Ok(line) => {
            report.degenerate = Some(line.degenerate);
            report.line = Some(line);
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok((report, Vec::new(), Some(e.into())));
        }
    }

    let rows = occupancies
        .par_iter()
        .map(|&(n_o, n_m)| {
            let d = duan_quantity(&p.with_occupancies(n_o, n_m))?;
            Ok(format!(
                "{},{},{},{},{}",
                g12(n_o),
                g12(n_m),
                g12(d.direct),
                g12(d.budget),
                d.entangled
            ))
        })
        .collect::<qnet::Result<Vec<String>>>();
    match rows {
        Ok(rows) => Ok((report, rows, None)),
        Err(e) => {
            report.error = Some(e.to_string());
            Ok((report, Vec::new(), Some(e.into())))
        }
    }
}

pub fn run(args: &BoundaryArgs) -> Result<i32> {
    let (report, rows, failure) = evaluate(args)?;
    write_json(&report_path(args), &report)?;
    if let Some(e) = failure {
        return Err(e);
    }
    write_csv(&args.out, HEADER, &rows)?;
    Ok(EXIT_OK)
}
