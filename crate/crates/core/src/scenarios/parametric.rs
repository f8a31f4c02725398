//! Two-mode squeezer with local degenerate parametric drives.
//!
//! With a parametric amplitude `η` the X quadrature of a mode decays at
//! `(γ+η)/2` and P at `(γ−η)/2`. The quadratures split into the commuting
//! pairs `(X₁, Y₂)` and `(X₂, Y₁)`, each a closed real 2×2 system driven by
//! its own input quadratures.

use serde::{Deserialize, Serialize};

use super::two_mode::TwoModeParams;
use crate::error::{Error, Result};
use crate::linalg::lyapunov::solve_lyapunov;
use crate::linalg::matrix::{CMatrix, C64};
use crate::linalg::ensure_stable;
use crate::network::NetworkSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricParams {
    #[serde(flatten)]
    pub base: TwoModeParams,
    pub eta1: f64,
    pub eta2: f64,
}

impl ParametricParams {
    pub fn delta_eta(&self) -> f64 {
        self.eta1 - self.eta2
    }

    pub fn spec(&self) -> NetworkSpec {
        self.base
            .spec()
            .parametric(0, C64::new(self.eta1, 0.0))
            .parametric(1, C64::new(self.eta2, 0.0))
    }

    fn validate(&self) -> Result<()> {
        let b = &self.base;
        for (name, v) in [
            ("g_plus", b.g_plus),
            ("g_minus", b.g_minus),
            ("eta1", self.eta1),
            ("eta2", self.eta2),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("gamma1", b.gamma1), ("gamma2", b.gamma2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// `((γ₁+γ₂)² − Δ(γ₁−γ₂)) / ((γ₁+γ₂)² − Δ²)` with `Δ = η₁ − η₂`.
pub fn parametric_bound(p: &ParametricParams) -> Result<f64> {
    bound_at(p.base.gamma1, p.base.gamma2, p.delta_eta())
}

pub(crate) fn bound_at(gamma1: f64, gamma2: f64, delta: f64) -> Result<f64> {
    let s2 = (gamma1 + gamma2).powi(2);
    let den = s2 - delta * delta;
    if den.abs() <= 1e-14 * s2 {
        return Err(Error::Singularity(format!(
            "|η1 − η2| = {} equals γ1 + γ2: stability boundary",
            delta.abs()
        )));
    }
    Ok((s2 - delta * (gamma1 - gamma2)) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricOptimum {
    /// Closed-form optimizer `(γ₁+γ₂)(√γ₁−√γ₂)/(√γ₁+√γ₂)`.
    pub delta_eta_star: f64,
    /// Closed-form minimum `1/2 + √(γ₁γ₂)/(γ₁+γ₂)`.
    pub min_value: f64,
    pub numeric_delta_eta: f64,
    pub numeric_value: f64,
}

pub fn parametric_optimum(gamma1: f64, gamma2: f64) -> Result<ParametricOptimum> {
    if !(gamma1 > 0.0 && gamma2 > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "rates must be positive, got {gamma1}, {gamma2}"
        )));
    }
    let s = gamma1 + gamma2;
    let (r1, r2) = (gamma1.sqrt(), gamma2.sqrt());
    let delta_eta_star = s * (r1 - r2) / (r1 + r2);
    let min_value = 0.5 + (gamma1 * gamma2).sqrt() / s;

    let f = |d: f64| bound_at(gamma1, gamma2, d).unwrap_or(f64::INFINITY);
    let edge = s * (1.0 - 1e-9);
    let (coarse, _) = super::golden_section_max(|d| -f(d), -edge, edge, 1e-12);
    // The minimum is too flat for value comparisons to pin the location
    // beyond ~1e-8; finish by bisecting the sign of the derivative
    // numerator −dΔ² + 2S²Δ − dS².
    let d = gamma1 - gamma2;
    let slope = |x: f64| -d * x * x + 2.0 * s * s * x - d * s * s;
    let mut h = 1e-6 * s;
    let (mut lo, mut hi) = (coarse - h, coarse + h);
    while slope(lo) > 0.0 || slope(hi) < 0.0 {
        h *= 2.0;
        lo = (coarse - h).max(-edge);
        hi = (coarse + h).min(edge);
        if h > s {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let numeric_delta_eta = 0.5 * (lo + hi);
    Ok(ParametricOptimum {
        delta_eta_star,
        min_value,
        numeric_delta_eta,
        numeric_value: f(numeric_delta_eta),
    })
}

/// One value per quadrature `X₁, Y₁, X₂, Y₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockRatios {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BlockRatios {
    fn zip(&self, other: &BlockRatios, f: impl Fn(f64, f64) -> f64) -> BlockRatios {
        BlockRatios {
            x1: f(self.x1, other.x1),
            y1: f(self.y1, other.y1),
            x2: f(self.x2, other.x2),
            y2: f(self.y2, other.y2),
        }
    }

    pub fn min(&self) -> f64 {
        self.x1.min(self.y1).min(self.x2).min(self.y2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricCheck {
    /// `ΔQ²/ΔQ²_in` per quadrature.
    pub ratios: BlockRatios,
    /// Per-quadrature lower bounds `γ_own / (r_a + r_b)` of each block.
    pub bounds: BlockRatios,
    pub slacks: BlockRatios,
    /// `X₁ + X₂` ratios and their bound (the formula at `Δ`).
    pub x_pair_sum: f64,
    pub x_pair_bound: f64,
    /// `Y₁ + Y₂` ratios and their bound (the formula at `−Δ`).
    pub y_pair_sum: f64,
    pub y_pair_bound: f64,
    /// `min(X₁,Y₁) + min(X₂,Y₂)` over the axis quadratures.
    pub axis_optimal_sum: f64,
}

/// Steady state of `d/dt [a; b] = [[−r_a/2, G_Δ], [−G_Σ, −r_b/2]] [a; b] + inputs`,
/// as ratios to the input variances.
fn block_ratios(
    name: &str,
    rates: (f64, f64),
    g_delta: f64,
    g_sigma: f64,
    gammas: (f64, f64),
    input_var: (f64, f64),
) -> Result<(f64, f64)> {
    let a = CMatrix::from_real_rows(&[
        [-0.5 * rates.0, g_delta],
        [-g_sigma, -0.5 * rates.1],
    ]);
    ensure_stable(&a).map_err(|e| match e {
        Error::Unstable { eigenvalue } => Error::UnstableBlock {
            block: name.to_string(),
            eigenvalue,
        },
        other => other,
    })?;
    let q = CMatrix::from_real_diagonal(&[gammas.0 * input_var.0, gammas.1 * input_var.1]);
    let v = solve_lyapunov(&a, &q)?;
    Ok((v[(0, 0)].re / input_var.0, v[(1, 1)].re / input_var.1))
}

pub fn parametric_variance_check(p: &ParametricParams) -> Result<ParametricCheck> {
    p.validate()?;
    let b = &p.base;
    let (g1, g2) = (b.gamma1, b.gamma2);
    let g_sigma = b.g_minus + b.g_plus;
    let g_delta = b.g_minus - b.g_plus;
    let (v1, v2) = (b.n1 + 0.5, b.n2 + 0.5);
    let (rx1, ry1) = (g1 + p.eta1, g1 - p.eta1);
    let (rx2, ry2) = (g2 + p.eta2, g2 - p.eta2);

    let (x1, y2) = block_ratios("(X1, Y2)", (rx1, ry2), g_delta, g_sigma, (g1, g2), (v1, v2))?;
    let (x2, y1) = block_ratios("(X2, Y1)", (rx2, ry1), g_delta, g_sigma, (g2, g1), (v2, v1))?;
    let ratios = BlockRatios { x1, y1, x2, y2 };
    let bounds = BlockRatios {
        x1: g1 / (rx1 + ry2),
        y2: g2 / (rx1 + ry2),
        x2: g2 / (rx2 + ry1),
        y1: g1 / (rx2 + ry1),
    };
    let delta = p.delta_eta();
    Ok(ParametricCheck {
        ratios,
        bounds,
        slacks: ratios.zip(&bounds, |r, b| r - b),
        x_pair_sum: x1 + x2,
        x_pair_bound: bound_at(g1, g2, delta)?,
        y_pair_sum: y1 + y2,
        y_pair_bound: bound_at(g1, g2, -delta)?,
        axis_optimal_sum: x1.min(y1) + x2.min(y2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::build_state_space;
    use crate::steady::{steady_covariance, InputMoments};

    fn params(g_script: f64, xi: f64, g1: f64, g2: f64, e1: f64, e2: f64) -> ParametricParams {
        ParametricParams {
            base: TwoModeParams::from_frame(g_script, xi, g1, g2),
            eta1: e1,
            eta2: e2,
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(parametric_bound(&params(1.0, 0.5, 3.0, 1.0, 0.4, 0.4)).unwrap(), 1.0);
        let v = parametric_bound(&params(1.0, 0.5, 4.0, 1.0, 5.0 / 3.0, 0.0)).unwrap();
        assert!((v - 0.9).abs() < 1e-15);
        let v = parametric_bound(&params(1.0, 0.5, 1.0, 1.0, 1.0, 0.0)).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            parametric_bound(&params(1.0, 0.5, 1.0, 1.0, 2.0, 0.0)),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn optimum_closed_form_and_numeric() {
        let o = parametric_optimum(4.0, 1.0).unwrap();
        assert!((o.delta_eta_star - 5.0 / 3.0).abs() < 1e-15);
        assert!((o.min_value - 0.9).abs() < 1e-15);
        assert!((o.numeric_delta_eta - o.delta_eta_star).abs() < 1e-9, "{o:?}");
        assert!((o.numeric_value - o.min_value).abs() < 1e-12);

        let o = parametric_optimum(2.0, 2.0).unwrap();
        assert_eq!(o.delta_eta_star, 0.0);
        assert!((o.min_value - 1.0).abs() < 1e-15);
        assert!(o.numeric_delta_eta.abs() < 1e-9);

        let o = parametric_optimum(1e4, 1.0).unwrap();
        assert!((o.min_value - (0.5 + 100.0 / 10001.0)).abs() < 1e-15);
        assert!((o.numeric_value - o.min_value).abs() < 1e-12);
    }

    #[test]
    fn blocks_match_full_covariance() {
        let p = params(2.0, 0.4, 4.0, 1.0, 1.2, -0.3)
            .base
            .with_occupancies(0.3, 1.1);
        let p = ParametricParams {
            base: p,
            eta1: 1.2,
            eta2: -0.3,
        };
        let chk = parametric_variance_check(&p).unwrap();
        let spec = p.spec();
        let cs = steady_covariance(
            &build_state_space(&spec).unwrap(),
            &InputMoments::from_baths(&spec),
        )
        .unwrap();
        let (b1, b2) = (cs.quadrature_block(0), cs.quadrature_block(1));
        let (v1, v2) = (0.8, 1.6);
        assert!((b1[0][0] / v1 - chk.ratios.x1).abs() < 1e-12);
        assert!((b1[1][1] / v1 - chk.ratios.y1).abs() < 1e-12);
        assert!((b2[0][0] / v2 - chk.ratios.x2).abs() < 1e-12);
        assert!((b2[1][1] / v2 - chk.ratios.y2).abs() < 1e-12);
        assert!(chk.slacks.min() >= -1e-12);
        assert!(chk.x_pair_sum >= chk.x_pair_bound - 1e-12);
        assert!(chk.y_pair_sum >= chk.y_pair_bound - 1e-12);
    }

    #[test]
    fn no_drive_reduces_to_two_mode() {
        let p = params(1.5, 0.5, 1.0, 1.0, 0.0, 0.0);
        let chk = parametric_variance_check(&p).unwrap();
        let direct = super::super::two_mode_squeezing_power(&p.base).unwrap();
        let want = direct.sum;
        assert!((chk.axis_optimal_sum - want).abs() < 1e-10, "{chk:?} {want}");
        assert!((chk.x_pair_bound - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unstable_block_is_named() {
        let p = params(0.1, 0.0, 1.0, 1.0, 0.0, 1.5);
        match parametric_variance_check(&p) {
            Err(Error::UnstableBlock { block, .. }) => assert_eq!(block, "(X1, Y2)"),
            other => panic!("{other:?}"),
        }
    }
}
