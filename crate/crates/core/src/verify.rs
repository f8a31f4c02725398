//! Seeded invariant suites with residual statistics.
//!
//! Every suite maps each case to a non-negative metric (a residual or a
//! bound violation) and fails a case when the metric exceeds the suite
//! tolerance. Cases that error out are counted separately and also fail.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{
    beam_splitter_i12, budget_via_spectrum, compute_budget, verify_reciprocity,
    verify_sum_rules_with,
};
use crate::error::Result;
use crate::linalg::matrix::C64;
use crate::linalg::Tolerances;
use crate::network::{build_state_space, check_physical_realizability, is_passive, BathSpec, NetworkSpec};
use crate::random::{
    random_inputs, random_network, random_passive_network, random_three_mode, rng,
};
use crate::scenarios::{
    boundary_flip, duan_quantity, optimal_coupling, parametric_optimum,
    parametric_variance_check, separability_boundary, three_mode_budget,
    two_mode_squeezing_power, two_mode_squeezing_power_via_budget, ParametricParams,
    TwoModeParams,
};
use crate::steady::{quadrature_variance, steady_covariance, variance_decomposition, InputMoments};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Absolute tolerance for the frequency-domain route.
pub const ROUTE_TOL: f64 = 1e-6;
/// Absolute error target handed to the quadrature in the route suite.
pub const ROUTE_QUAD_TOL: f64 = 1e-9;
pub const BOUND_TOL: f64 = 1e-9;
pub const DECOMPOSITION_TOL: f64 = 1e-10;
pub const DUAN_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-12;
pub const GOPT_RATIO: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces the tolerance of every residual and bound suite.
    pub tol: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            tol: None,
        }
    }
}

impl VerifyConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub tol: f64,
    pub cases: usize,
    pub failures: usize,
    pub errors: usize,
    pub max: f64,
    pub mean: f64,
    pub passed: bool,
}

impl SuiteReport {
    /// Summarizes per-case metrics; `Err` entries count as errors.
    pub fn from_metrics(name: &str, tol: f64, metrics: &[Result<f64>]) -> Self {
        let ok: Vec<f64> = metrics.iter().filter_map(|m| m.as_ref().ok().copied()).collect();
        let errors = metrics.len() - ok.len();
        let failures = ok.iter().filter(|&&m| !(m <= tol)).count() + errors;
        let max = ok.iter().copied().fold(0.0f64, f64::max);
        let mean = if ok.is_empty() {
            0.0
        } else {
            ok.iter().sum::<f64>() / ok.len() as f64
        };
        SuiteReport {
            name: name.to_string(),
            tol,
            cases: metrics.len(),
            failures,
            errors,
            max,
            mean,
            passed: failures == 0,
        }
    }
}

/// A reported quantity that is not part of the pass verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub tol_override: Option<f64>,
    pub suites: Vec<SuiteReport>,
    pub observations: Vec<Observation>,
    pub passed: bool,
}

fn stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `count` networks with `N ≤ 5`, roughly half active.
pub fn random_networks(seed: u64, count: usize) -> Vec<NetworkSpec> {
    let mut r = rng(stream_seed(seed, 1));
    (0..count).map(|_| random_network(&mut r, 5)).collect()
}

fn max_or(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0f64, f64::max)
}

pub fn pr_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .map(|s| Ok(check_physical_realizability(&build_state_space(s)?, tol).residual))
        .collect();
    SuiteReport::from_metrics("physical_realizability", tol, &m)
}

pub fn completeness_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .map(|s| {
            let b = compute_budget(&build_state_space(s)?)?;
            Ok(verify_sum_rules_with(&b, tol)?.completeness_residual)
        })
        .collect();
    SuiteReport::from_metrics("commutator_sum_rule", tol, &m)
}

pub fn gamma_rule_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .filter(|s| is_passive(s))
        .map(|s| {
            let b = compute_budget(&build_state_space(s)?)?;
            let r = verify_sum_rules_with(&b, tol)?;
            Ok(max_or(r.gamma_rule_residuals.iter().map(|x| x.abs())))
        })
        .collect();
    SuiteReport::from_metrics("damping_sum_rule", tol, &m)
}

/// Violation `max(0, −λ_min(K_i))` on passive networks.
pub fn positivity_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .filter(|s| is_passive(s))
        .map(|s| {
            let b = compute_budget(&build_state_space(s)?)?;
            let r = verify_sum_rules_with(&b, Tolerances::SUM_RULE)?;
            Ok(max_or(r.positivity_min_eigs.iter().map(|&e| -e)))
        })
        .collect();
    SuiteReport::from_metrics("channel_positivity", tol, &m)
}

pub fn reciprocity_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .map(|s| Ok(verify_reciprocity(&compute_budget(&build_state_space(s)?)?).max_residual))
        .collect();
    SuiteReport::from_metrics("reciprocity", tol, &m)
}

/// Entrywise distance between the Lyapunov and frequency-domain `K_i`.
pub fn route_suite(specs: &[NetworkSpec], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = specs
        .par_iter()
        .map(|s| {
            let ss = build_state_space(s)?;
            let a = compute_budget(&ss)?;
            let b = budget_via_spectrum(&ss, ROUTE_QUAD_TOL)?;
            Ok(max_or(
                a.per_channel_k
                    .iter()
                    .zip(&b.per_channel_k)
                    .map(|(x, y)| x.max_abs_diff(y)),
            ))
        })
        .collect();
    SuiteReport::from_metrics("lyapunov_vs_spectral", tol, &m)
}

/// `(g, γ₁, γ₂)` sample points for the beam-splitter closed form.
pub fn oracle_points() -> Vec<(f64, f64, f64)> {
    let mut pts = Vec::new();
    for g in [0.0, 0.25, 0.5, 1.0, 3.0] {
        for (g1, g2) in [(1.0, 1.0), (4.0, 1.0), (0.3, 2.0), (0.1, 10.0), (7.0, 7.0)] {
            pts.push((g, g1, g2));
        }
    }
    pts
}

pub fn oracle_suite(points: &[(f64, f64, f64)], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = points
        .iter()
        .map(|&(g, g1, g2)| {
            let spec = NetworkSpec::new(vec![BathSpec::vacuum(g1), BathSpec::vacuum(g2)])
                .beam_splitter(0, 1, C64::new(g, 0.0));
            let b = compute_budget(&build_state_space(&spec)?)?;
            Ok((b.transfer[0][1] - beam_splitter_i12(g, g1, g2)).abs())
        })
        .collect();
    SuiteReport::from_metrics("beam_splitter_closed_form", tol, &m)
}

/// PSD violation, Hermitian residual and Heisenberg violation of steady
/// states under random physical inputs.
pub fn steady_physics_suites(seed: u64, specs: &[NetworkSpec], tol: Option<f64>) -> Vec<SuiteReport> {
    let mut r = rng(stream_seed(seed, 2));
    let inputs: Vec<InputMoments> = specs
        .iter()
        .map(|s| random_inputs(&mut r, s.n_modes, true))
        .collect();
    let rows: Vec<Result<(f64, f64, f64)>> = specs
        .par_iter()
        .zip(&inputs)
        .map(|(s, inp)| {
            let cs = steady_covariance(&build_state_space(s)?, inp)?;
            let psd = (-cs.min_eigenvalue()?).max(0.0);
            let herm = cs.hermitian_residual();
            let heis = max_or(cs.heisenberg_products().iter().map(|p| 0.25 - p));
            Ok((psd, herm, heis))
        })
        .collect();
    let pick = |k: usize| -> Vec<Result<f64>> {
        rows.iter()
            .map(|r| match r {
                Ok(t) => Ok([t.0, t.1, t.2][k]),
                Err(e) => Err(e.clone()),
            })
            .collect()
    };
    vec![
        SuiteReport::from_metrics("covariance_psd", tol.unwrap_or(-Tolerances::PSD), &pick(0)),
        SuiteReport::from_metrics("covariance_hermitian", tol.unwrap_or(Tolerances::HERMITIAN), &pick(1)),
        SuiteReport::from_metrics("heisenberg", tol.unwrap_or(1e-10), &pick(2)),
    ]
}

/// Decomposition vs direct covariance on passive networks, 8 angles each.
pub fn decomposition_suite(seed: u64, count: usize, tol: f64) -> SuiteReport {
    let mut r = rng(stream_seed(seed, 3));
    let cases: Vec<(NetworkSpec, InputMoments)> = (0..count)
        .map(|k| {
            let n = 1 + k % 5;
            let spec = random_passive_network(&mut r, n, false);
            let inp = random_inputs(&mut r, n, false);
            (spec, inp)
        })
        .collect();
    let m: Vec<Result<f64>> = cases
        .par_iter()
        .map(|(s, inp)| {
            let ss = build_state_space(s)?;
            let b = compute_budget(&ss)?;
            let cs = steady_covariance(&ss, inp)?;
            let mut worst = 0.0f64;
            for k in 0..8 {
                let th = k as f64 * std::f64::consts::PI / 8.0;
                let dec = variance_decomposition(&ss, &b, inp, th)?;
                for (i, d) in dec.iter().enumerate() {
                    worst = worst.max((quadrature_variance(&cs, i, th) - d).abs());
                }
            }
            Ok(worst)
        })
        .collect();
    SuiteReport::from_metrics("variance_decomposition", tol, &m)
}

/// `(𝒢, ξ)` grid used for the two-mode bound.
pub fn two_mode_grid() -> Vec<(f64, f64)> {
    let gs = crate::scenarios::logspace(0.1, 50.0, 20);
    let xs: Vec<f64> = (0..20).map(|k| 0.05 + 1.95 * k as f64 / 19.0).collect();
    gs.iter().flat_map(|&g| xs.iter().map(move |&x| (g, x))).collect()
}

/// Two-mode parameter sets: the grid with vacuum inputs at equal damping
/// and with thermal inputs at unequal damping.
pub fn two_mode_cases() -> Vec<TwoModeParams> {
    let mut out = Vec::new();
    for (g, xi) in two_mode_grid() {
        out.push(TwoModeParams::from_frame(g, xi, 1.0, 1.0));
        out.push(TwoModeParams::from_frame(g, xi, 1.0, 2.5).with_occupancies(0.5, 2.0));
    }
    out
}

/// Violation `max(0, 1 − Σ normalized min variances)`.
pub fn two_mode_bound_suite(cases: &[TwoModeParams], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = cases
        .par_iter()
        .map(|p| Ok((-two_mode_squeezing_power(p)?.slack).max(0.0)))
        .collect();
    SuiteReport::from_metrics("two_mode_bound", tol, &m)
}

pub fn two_mode_route_suite(cases: &[TwoModeParams], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = cases
        .par_iter()
        .map(|p| {
            let a = two_mode_squeezing_power(p)?;
            let b = two_mode_squeezing_power_via_budget(p)?;
            Ok(max_or(
                a.min_variance
                    .iter()
                    .zip(&b.min_variance)
                    .map(|(x, y)| (x - y).abs()),
            ))
        })
        .collect();
    SuiteReport::from_metrics("two_mode_routes", tol, &m)
}

pub fn parametric_optimum_suite(tol: f64) -> SuiteReport {
    let pairs = [(4.0, 1.0), (1.0, 4.0), (1.0, 1.0), (10.0, 0.1), (2.0, 3.0), (1e4, 1.0)];
    let m: Vec<Result<f64>> = pairs
        .iter()
        .map(|&(g1, g2)| {
            let o = parametric_optimum(g1, g2)?;
            Ok((o.numeric_delta_eta - o.delta_eta_star)
                .abs()
                .max((o.numeric_value - o.min_value).abs()))
        })
        .collect();
    SuiteReport::from_metrics("parametric_optimum", tol, &m)
}

/// Parametric grid over the stability region: `(γ₁, γ₂)` pairs, `Δη`,
/// `𝒢` and `ξ`, with `η₂ = 0`. Unstable points are skipped.
pub fn parametric_cases() -> Vec<ParametricParams> {
    let mut out = Vec::new();
    for (g1, g2) in [(4.0, 1.0), (1.0, 1.0), (1.0, 4.0), (10.0, 0.1)] {
        let s: f64 = g1 + g2;
        for k in 0..41 {
            let delta = -0.98 * s + 1.96 * s * k as f64 / 40.0;
            for g in crate::scenarios::logspace(0.01, 100.0, 12) {
                for xi in [0.0, 0.5, 1.5] {
                    out.push(ParametricParams {
                        base: TwoModeParams::from_frame(g, xi, g1, g2),
                        eta1: delta,
                        eta2: 0.0,
                    });
                }
            }
        }
    }
    out
}

/// Worst violation of the pair bounds and the per-quadrature bounds.
pub fn parametric_bound_suite(cases: &[ParametricParams], tol: f64) -> SuiteReport {
    let m: Vec<Result<f64>> = cases
        .par_iter()
        .filter_map(|p| match parametric_variance_check(p) {
            Err(e) if e.is_instability() => None,
            Err(e) => Some(Err(e)),
            Ok(c) => Some(Ok(max_or([
                c.x_pair_bound - c.x_pair_sum,
                c.y_pair_bound - c.y_pair_sum,
                -c.slacks.min(),
            ]))),
        })
        .collect();
    SuiteReport::from_metrics("parametric_bound", tol, &m)
}

pub fn duan_route_suite(seed: u64, count: usize, tol: f64) -> SuiteReport {
    let mut r = rng(stream_seed(seed, 4));
    let params: Vec<_> = (0..count).map(|_| random_three_mode(&mut r, 0.0)).collect();
    let m: Vec<Result<f64>> = params
        .par_iter()
        .map(|p| {
            let d = duan_quantity(p)?;
            Ok((d.direct - d.budget).abs())
        })
        .collect();
    SuiteReport::from_metrics("duan_routes", tol, &m)
}

/// Verdict flips at ±5% normal offsets; metric 1 for a missing flip.
pub fn boundary_suite(seed: u64, count: usize) -> SuiteReport {
    let mut r = rng(stream_seed(seed, 5));
    let params: Vec<_> = (0..count).map(|_| random_three_mode(&mut r, 0.2)).collect();
    let m: Vec<Result<f64>> = params
        .par_iter()
        .map(|p| {
            let f = boundary_flip(p, 0.05)?;
            let line = separability_boundary(p.xi, three_mode_budget(p)?.eta_e)?;
            let intercept = (line.n_o_intercept - 0.5 * ((2.0f64 * p.xi).exp() - 1.0)).abs();
            Ok(if f.flips && intercept == 0.0 { 0.0 } else { 1.0 })
        })
        .collect();
    SuiteReport::from_metrics("separability_boundary", 0.0, &m)
}

/// `(κ/Ω, γ_m/κ)` combinations with `Ω = 1`.
pub fn gopt_cases() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for kr in [0.1, 0.3, 1.0, 3.0, 10.0] {
        for gr in [1e-3, 1e-2] {
            out.push((kr, gr));
        }
    }
    out
}

/// Metric `max(0, 0.99 − η_e(formula)/η_e(numeric))`.
pub fn gopt_suite(cases: &[(f64, f64)]) -> SuiteReport {
    let m: Vec<Result<f64>> = cases
        .par_iter()
        .map(|&(kr, gr)| {
            let o = optimal_coupling(kr, 1.0, gr * kr)?;
            Ok((GOPT_RATIO - o.eta_formula / o.eta_numeric).max(0.0))
        })
        .collect();
    SuiteReport::from_metrics("optimal_coupling", 0.0, &m)
}

/// Strong-coupling two-mode sum at `𝒢/γ = 50`, `ξ = 0.5`.
pub fn strong_coupling_observation() -> Result<Observation> {
    let r = two_mode_squeezing_power(&TwoModeParams::from_frame(50.0, 0.5, 1.0, 1.0))?;
    Ok(Observation {
        name: "two_mode_strong_coupling_sum".into(),
        value: r.sum,
        threshold: 1.02,
        holds: r.sum <= 1.02,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let specs = random_networks(cfg.seed, 100);
    let mut real = rng(stream_seed(cfg.seed, 6));
    let reciprocal: Vec<NetworkSpec> = (0..50)
        .map(|k| random_passive_network(&mut real, 1 + k % 5, true))
        .collect();
    let two_mode = two_mode_cases();

    let mut suites = vec![
        pr_suite(&specs, cfg.tol(Tolerances::PR)),
        completeness_suite(&specs, cfg.tol(Tolerances::SUM_RULE)),
        gamma_rule_suite(&specs, cfg.tol(Tolerances::SUM_RULE)),
        positivity_suite(&specs, cfg.tol(-Tolerances::PSD)),
        reciprocity_suite(&reciprocal, cfg.tol(Tolerances::SUM_RULE)),
        route_suite(&specs, cfg.tol(ROUTE_TOL)),
        oracle_suite(&oracle_points(), cfg.tol(ORACLE_TOL)),
    ];
    suites.extend(steady_physics_suites(cfg.seed, &specs, cfg.tol));
    suites.push(decomposition_suite(cfg.seed, 50, cfg.tol(DECOMPOSITION_TOL)));
    suites.push(two_mode_bound_suite(&two_mode, cfg.tol(BOUND_TOL)));
    suites.push(two_mode_route_suite(&two_mode, cfg.tol(DECOMPOSITION_TOL)));
    suites.push(parametric_optimum_suite(cfg.tol(BOUND_TOL)));
    suites.push(parametric_bound_suite(&parametric_cases(), cfg.tol(BOUND_TOL)));
    suites.push(duan_route_suite(cfg.seed, 50, cfg.tol(DUAN_TOL)));
    suites.push(boundary_suite(cfg.seed, 10));
    suites.push(gopt_suite(&gopt_cases()));

    let observations = vec![strong_coupling_observation()?];
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport {
        seed: cfg.seed,
        tol_override: cfg.tol,
        suites,
        observations,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_summary() {
        let r = SuiteReport::from_metrics(
            "x",
            0.5,
            &[Ok(0.1), Ok(0.7), Err(crate::Error::Singularity("s".into()))],
        );
        assert_eq!((r.cases, r.failures, r.errors), (3, 2, 1));
        assert_eq!(r.max, 0.7);
        assert!((r.mean - 0.4).abs() < 1e-15);
        assert!(!r.passed);
        let nan = SuiteReport::from_metrics("n", 1.0, &[Ok(f64::NAN)]);
        assert_eq!(nan.failures, 1);
    }

    #[test]
    fn small_suites_pass() {
        let specs = random_networks(1, 12);
        assert!(pr_suite(&specs, Tolerances::PR).passed);
        assert!(completeness_suite(&specs, Tolerances::SUM_RULE).passed);
        assert!(oracle_suite(&oracle_points(), ORACLE_TOL).passed);
        let tight = completeness_suite(&specs, 1e-18);
        assert!(!tight.passed && tight.max > 0.0);
    }

    #[test]
    fn grids_have_documented_sizes() {
        assert_eq!(two_mode_grid().len(), 400);
        assert_eq!(oracle_points().len(), 25);
        assert_eq!(gopt_cases().len(), 10);
    }
}
