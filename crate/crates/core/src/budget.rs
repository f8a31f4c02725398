//! Per-channel commutator budgets `W_i`, commutator channels `K_i` and
//! transfer integrals `I_ij = (K_j)_ii`.
//!
//! `W_i` is the stationary solution of `Ā W + W Ā† + D_i Σ D_i† = 0`, where
//! `D_i` holds both doubled-space columns of channel `i`. `K_i` is its
//! annihilation-sector block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::lyapunov::{lyapunov_operator, solve_with};
use crate::linalg::matrix::{CMatrix, Lu, I};
use crate::linalg::{eigenvalues, ensure_stable, integrate_spectrum_on, SpectralGrid, Tolerances};
use crate::network::StateSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorBudget {
    pub per_channel_w: Vec<CMatrix>,
    pub per_channel_k: Vec<CMatrix>,
    /// `transfer[i][j] = (K_j)_ii`.
    pub transfer: Vec<Vec<f64>>,
    pub gammas: Vec<f64>,
    /// No a ↔ a† mixing in the drift.
    pub passive: bool,
    /// `A + A† = −diag(γ)` on the annihilation sector.
    pub diagonal_dissipation: bool,
}

impl CommutatorBudget {
    fn from_w(ss: &StateSpace, per_channel_w: Vec<CMatrix>) -> Result<Self> {
        let n = ss.n_modes();
        let per_channel_k: Vec<CMatrix> = per_channel_w
            .iter()
            .map(|w| w.block(0, 0, n, n))
            .collect();
        let mut transfer = vec![vec![0.0; n]; n];
        for (j, k) in per_channel_k.iter().enumerate() {
            for (i, row) in transfer.iter_mut().enumerate() {
                let z = k[(i, i)];
                if z.im.abs() > Tolerances::TRANSFER_IMAG {
                    return Err(Error::NotHermitian {
                        residual: z.im.abs(),
                    });
                }
                row[j] = z.re;
            }
        }
        Ok(CommutatorBudget {
            per_channel_w,
            per_channel_k,
            transfer,
            gammas: ss.gammas(),
            passive: ss.is_passive(),
            diagonal_dissipation: ss.has_diagonal_dissipation(),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.gammas.len()
    }

    /// `I_ij`.
    pub fn transfer_integral(&self, mode: usize, channel: usize) -> f64 {
        self.transfer[mode][channel]
    }

    /// `Σ_i K_i`.
    pub fn k_sum(&self) -> CMatrix {
        let n = self.n_modes();
        self.per_channel_k
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| &acc + k)
    }

    /// `Σ_i W_i`, equal to Σ for a physically realizable network.
    pub fn w_sum(&self) -> CMatrix {
        let d = 2 * self.n_modes();
        self.per_channel_w
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, w| &acc + w)
    }
}

pub fn compute_budget(ss: &StateSpace) -> Result<CommutatorBudget> {
    ensure_stable(&ss.drift)?;
    let lu = lyapunov_operator(&ss.drift)?;
    let d = ss.dim();
    let w: Vec<CMatrix> = (0..ss.n_modes())
        .map(|i| solve_with(&lu, d, &ss.channel_noise(i)))
        .collect();
    CommutatorBudget::from_w(ss, w)
}

/// Frequency-domain route: integrates `T(ω) Σ_i T(ω)†` channel by channel,
/// with `T(ω) = (−iω − Ā)⁻¹ D`. The annihilation block of the integrand is
/// `M_ij M*_kj − L_ij L*_kj`.
pub fn budget_via_spectrum(ss: &StateSpace, abs_tol: f64) -> Result<CommutatorBudget> {
    let spectrum = ensure_stable(&ss.drift)?;
    let n = ss.n_modes();
    let d = ss.dim();
    let scale = spectrum
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    let mut breakpoints = Vec::new();
    for z in &spectrum.eigenvalues {
        let center = -z.im;
        breakpoints.extend([center, center - z.re.abs(), center + z.re.abs()]);
    }
    let grid = SpectralGrid { scale, breakpoints };

    let integrand = |omega: f64| -> CMatrix {
        let resolvent = &CMatrix::identity(d).scale(-I * omega) - &ss.drift;
        let t = match Lu::factor(&resolvent) {
            Ok(lu) => lu.solve(&ss.input),
            // only reachable on the imaginary axis of a marginal drift
            Err(_) => return CMatrix::zeros(d, n * d),
        };
        let mut out = CMatrix::zeros(d, n * d);
        for ch in 0..n {
            for p in 0..d {
                let mp = t[(p, ch)];
                let lp = t[(p, n + ch)];
                for q in 0..d {
                    out[(p, ch * d + q)] = mp * t[(q, ch)].conj() - lp * t[(q, n + ch)].conj();
                }
            }
        }
        out
    };
    let packed = integrate_spectrum_on(integrand, &grid, abs_tol)?;
    let w: Vec<CMatrix> = (0..n)
        .map(|ch| packed.block(0, ch * d, d, d).hermitian_part())
        .collect();
    CommutatorBudget::from_w(ss, w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    /// ‖Σ_i K_i − I‖_max.
    pub completeness_residual: f64,
    /// `Σ_j γ_j (K_i)_jj − γ_i` per channel; empty unless the network is
    /// passive with diagonal dissipation.
    pub gamma_rule_residuals: Vec<f64>,
    /// Smallest eigenvalue of each `K_i`; empty for non-passive networks.
    pub positivity_min_eigs: Vec<f64>,
    pub passed: bool,
}

pub fn verify_sum_rules(b: &CommutatorBudget) -> Result<SumRuleReport> {
    verify_sum_rules_with(b, Tolerances::SUM_RULE)
}

pub fn verify_sum_rules_with(b: &CommutatorBudget, tol: f64) -> Result<SumRuleReport> {
    let n = b.n_modes();
    let completeness_residual = b.k_sum().max_abs_diff(&CMatrix::identity(n));
    let mut passed = completeness_residual <= tol;

    let mut gamma_rule_residuals = Vec::new();
    let mut positivity_min_eigs = Vec::new();
    if b.passive {
        if b.diagonal_dissipation {
            for (i, &gi) in b.gammas.iter().enumerate() {
                let s: f64 = (0..n).map(|j| b.gammas[j] * b.transfer[j][i]).sum();
                let r = s - gi;
                passed &= r.abs() <= tol;
                gamma_rule_residuals.push(r);
            }
        }
        for k in &b.per_channel_k {
            let min = eigenvalues(k)?
                .eigenvalues
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            passed &= min >= Tolerances::PSD;
            positivity_min_eigs.push(min);
        }
    }
    Ok(SumRuleReport {
        completeness_residual,
        gamma_rule_residuals,
        positivity_min_eigs,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    /// `(i, j, γ_j I_ji − γ_i I_ij)` for `i < j`.
    pub residuals: Vec<(usize, usize, f64)>,
    pub max_residual: f64,
}

pub fn verify_reciprocity(b: &CommutatorBudget) -> ReciprocityReport {
    let n = b.n_modes();
    let mut residuals = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let r = b.gammas[j] * b.transfer[j][i] - b.gammas[i] * b.transfer[i][j];
            residuals.push((i, j, r));
        }
    }
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.2.abs()));
    ReciprocityReport {
        residuals,
        max_residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IxReport {
    /// `I_x = I₁₂/γ₂`.
    pub ix: f64,
    /// `I₂₁/γ₁`, equal to `ix` by reciprocity.
    pub ix_reverse: f64,
    /// `1/(γ₁ + γ₂)`.
    pub bound: f64,
    /// `bound − ix`.
    pub slack: f64,
    pub diagonal_sum: f64,
    /// `I₁₁ + I₂₂ − 1`.
    pub diagonal_slack: f64,
}

pub fn two_mode_ix_bound(b: &CommutatorBudget) -> Result<IxReport> {
    if b.n_modes() != 2 {
        return Err(Error::NotApplicable(format!(
            "I_x bound needs N = 2, got N = {}",
            b.n_modes()
        )));
    }
    if !b.passive || !b.diagonal_dissipation {
        return Err(Error::NotApplicable(
            "I_x bound needs a passive network with diagonal dissipation".into(),
        ));
    }
    let (g1, g2) = (b.gammas[0], b.gammas[1]);
    let ix = b.transfer[0][1] / g2;
    let bound = 1.0 / (g1 + g2);
    let diagonal_sum = b.transfer[0][0] + b.transfer[1][1];
    Ok(IxReport {
        ix,
        ix_reverse: b.transfer[1][0] / g1,
        bound,
        slack: bound - ix,
        diagonal_sum,
        diagonal_slack: diagonal_sum - 1.0,
    })
}

/// JSON shape of a budget report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    #[serde(rename = "I")]
    pub transfer: Vec<Vec<f64>>,
    pub sum_rule_residual: f64,
    pub gamma_rule_residuals: Vec<f64>,
    pub reciprocity_residuals: Vec<f64>,
    pub positivity_min_eigs: Vec<f64>,
}

pub fn budget_report(b: &CommutatorBudget) -> Result<BudgetReport> {
    let sums = verify_sum_rules(b)?;
    let rec = verify_reciprocity(b);
    Ok(BudgetReport {
        transfer: b.transfer.clone(),
        sum_rule_residual: sums.completeness_residual,
        gamma_rule_residuals: sums.gamma_rule_residuals,
        reciprocity_residuals: rec.residuals.iter().map(|r| r.2).collect(),
        positivity_min_eigs: sums.positivity_min_eigs,
    })
}

/// Closed-form `I₁₂` of a two-mode beam splitter with real coupling `g`.
pub fn beam_splitter_i12(g: f64, gamma1: f64, gamma2: f64) -> f64 {
    4.0 * g * g * gamma2 / ((gamma1 + gamma2) * (gamma1 * gamma2 + 4.0 * g * g))
}
