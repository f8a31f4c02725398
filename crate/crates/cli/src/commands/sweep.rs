//! `sweep`: two-mode and parametric scenario grids as CSV.

use anyhow::Result;
use rayon::prelude::*;

use qnet::scenarios::{
    parametric_bound, parametric_variance_check, two_mode_squeezing_power, ParametricParams,
    TwoModeParams,
};

use super::{or_nan, write_csv};
use crate::format::row;
use crate::grid::product;
use crate::{Scenario, SweepArgs, Validation, EXIT_OK};

pub const FIG1_HEADER: &str = "g_script,xi,gamma1,gamma2,norm_var1,norm_var2,sum";
pub const FIG2_HEADER: &str = "delta_eta,gamma1,gamma2,bound,direct_sum";

const FIG1_VARS: &[&str] = &["g_script", "xi", "gamma1", "gamma2", "n1", "n2"];
const FIG2_VARS: &[&str] = &["delta_eta", "gamma1", "gamma2", "g_script", "xi", "n1", "n2"];

#[derive(Debug, Clone, Copy)]
struct Point {
    g_script: f64,
    xi: f64,
    gamma1: f64,
    gamma2: f64,
    n1: f64,
    n2: f64,
    delta_eta: f64,
}

impl Point {
    fn set(&mut self, var: &str, v: f64) {
        match var {
            "g_script" => self.g_script = v,
            "xi" => self.xi = v,
            "gamma1" => self.gamma1 = v,
            "gamma2" => self.gamma2 = v,
            "n1" => self.n1 = v,
            "n2" => self.n2 = v,
            "delta_eta" => self.delta_eta = v,
            _ => unreachable!("grid variables are checked before evaluation"),
        }
    }

    fn check(&self) -> Result<(), Validation> {
        for (name, v) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(v > 0.0) {
                return Err(Validation(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("g_script", self.g_script), ("xi", self.xi), ("n1", self.n1), ("n2", self.n2)] {
            if !(v >= 0.0) {
                return Err(Validation(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    fn two_mode(&self) -> TwoModeParams {
        TwoModeParams::from_frame(self.g_script, self.xi, self.gamma1, self.gamma2)
            .with_occupancies(self.n1, self.n2)
    }
}

fn fig1_row(p: &Point) -> qnet::Result<Vec<f64>> {
    let r = two_mode_squeezing_power(&p.two_mode());
    let (v1, v2, sum) = match r {
        Ok(r) => (r.normalized[0], r.normalized[1], r.sum),
        Err(e) if e.is_instability() => (f64::NAN, f64::NAN, f64::NAN),
        Err(e) => return Err(e),
    };
    Ok(vec![p.g_script, p.xi, p.gamma1, p.gamma2, v1, v2, sum])
}

fn fig2_row(p: &Point, eta2: Option<f64>) -> qnet::Result<Vec<f64>> {
    let (eta1, eta2) = match eta2 {
        Some(e2) => (e2 + p.delta_eta, e2),
        None => {
            let s = p.gamma1 + p.gamma2;
            (p.delta_eta * p.gamma1 / s, -p.delta_eta * p.gamma2 / s)
        }
    };
    let params = ParametricParams {
        base: p.two_mode(),
        eta1,
        eta2,
    };
    let bound = or_nan(parametric_bound(&params))?;
    let direct = or_nan(parametric_variance_check(&params).map(|c| c.x_pair_sum))?;
    Ok(vec![p.delta_eta, p.gamma1, p.gamma2, bound, direct])
}

/// Header and formatted rows in grid order.
pub fn sweep_rows(args: &SweepArgs) -> Result<(&'static str, Vec<String>)> {
    let (header, allowed) = match args.scenario {
        Scenario::Fig1 => (FIG1_HEADER, FIG1_VARS),
        Scenario::Fig2 => (FIG2_HEADER, FIG2_VARS),
    };
    let base = Point {
        g_script: args.g_script,
        xi: args.xi,
        gamma1: args.gamma1,
        gamma2: args.gamma2,
        n1: args.n1,
        n2: args.n2,
        delta_eta: args.delta_eta,
    };
    let points: Vec<Point> = product(&args.grids, allowed)?
        .into_iter()
        .map(|vals| {
            let mut p = base;
            for (g, v) in args.grids.iter().zip(vals) {
                p.set(&g.var, v);
            }
            p
        })
        .collect();
    for p in &points {
        p.check()?;
    }
    let rows: Vec<Vec<f64>> = points
        .par_iter()
        .map(|p| match args.scenario {
            Scenario::Fig1 => fig1_row(p),
            Scenario::Fig2 => fig2_row(p, args.eta2),
        })
        .collect::<qnet::Result<_>>()?;
    let unstable = rows.iter().filter(|r| r.iter().any(|v| v.is_nan())).count();
    if unstable > 0 {
        eprintln!("warning: {unstable} grid points unstable or singular, written as nan");
    }
    Ok((header, rows.iter().map(|r| row(r)).collect()))
}

pub fn run(args: &SweepArgs) -> Result<i32> {
    let (header, rows) = sweep_rows(args)?;
    write_csv(&args.out, header, &rows)?;
    Ok(EXIT_OK)
}
