//! `analyze`: spectrum, budget, sum rules and steady-state variances.

use anyhow::Result;
use serde::Serialize;

use qnet::budget::{budget_report, compute_budget, BudgetReport};
use qnet::linalg::eigenvalues;
use qnet::network::{build_state_space, check_physical_realizability, NetworkSpec, PrReport};
use qnet::steady::{
    min_quadrature_variance, steady_covariance, InputMoments, InputMomentsFile,
};
use qnet::Tolerances;

use super::{read_text, write_json};
use crate::{AnalyzeArgs, Validation, EXIT_OK, EXIT_UNSTABLE};

pub const CONVENTION: &str =
    "symmetrized second moments; quadratures x=(a+a†)/√2, p=(a−a†)/(i√2); vacuum variance 1/2";

#[derive(Debug, Serialize)]
pub struct ModeVariance {
    pub mode: usize,
    pub var_x: f64,
    pub var_p: f64,
    pub min_theta: f64,
    pub min_value: f64,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub convention: &'static str,
    pub modes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub passive: bool,
    pub stable: bool,
    /// Drift eigenvalues `[re, im]`, largest real part first.
    pub spectrum: Vec<[f64; 2]>,
    pub physical_realizability: PrReport,
    pub budget: Option<BudgetReport>,
    pub sum_rules_passed: Option<bool>,
    pub variances: Option<Vec<ModeVariance>>,
    /// Quadrature covariance in `(x1, p1, x2, p2, …)` order.
    pub quadrature_covariance: Option<Vec<Vec<f64>>>,
    pub error: Option<String>,
}

pub fn analyze(spec: &NetworkSpec, inputs: &InputMoments) -> Result<AnalyzeReport> {
    let ss = build_state_space(spec)?;
    let spectrum = eigenvalues(&ss.drift)?;
    let mut report = AnalyzeReport {
        convention: CONVENTION,
        modes: ss.n_modes(),
        labels: spec.labels.clone(),
        passive: ss.is_passive(),
        stable: true,
        spectrum: spectrum.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
        physical_realizability: check_physical_realizability(&ss, Tolerances::PR),
        budget: None,
        sum_rules_passed: None,
        variances: None,
        quadrature_covariance: None,
        error: None,
    };
    let budget = match compute_budget(&ss) {
        Ok(b) => b,
        Err(e) if e.is_instability() => {
            report.stable = false;
            report.error = Some(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let sums = qnet::budget::verify_sum_rules(&budget)?;
    report.sum_rules_passed = Some(sums.passed);
    report.budget = Some(budget_report(&budget)?);
    let cs = steady_covariance(&ss, inputs)?;
    report.variances = Some(
        (0..ss.n_modes())
            .map(|i| {
                let b = cs.quadrature_block(i);
                let m = min_quadrature_variance(&cs, i);
                ModeVariance {
                    mode: i,
                    var_x: b[0][0],
                    var_p: b[1][1],
                    min_theta: m.theta,
                    min_value: m.value,
                }
            })
            .collect(),
    );
    report.quadrature_covariance = Some(cs.quadrature_covariance());
    Ok(report)
}

pub fn run(args: &AnalyzeArgs) -> Result<i32> {
    let spec = NetworkSpec::from_json(&read_text(&args.spec)?)?;
    let inputs = match &args.inputs {
        Some(path) => {
            let m = InputMomentsFile::from_json(&read_text(path)?)?.into_moments(spec.n_modes)?;
            if !m.is_physical() {
                return Err(Validation("input moments violate the uncertainty relation".into()).into());
            }
            m
        }
        None => InputMoments::from_baths(&spec),
    };
    let report = analyze(&spec, &inputs)?;
    write_json(&args.out, &report)?;
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
        return Ok(EXIT_UNSTABLE);
    }
    Ok(EXIT_OK)
}
