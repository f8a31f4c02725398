//! Cavity (mode 1) driven on both sidebands of two mechanical modes (2, 3)
//! split by `Ω`:
//! `H = G_bs a₁†(a₂ + a₃) + G_sq a₁†(a₂† + a₃†) + h.c. + (Ω/2)(a₂†a₂ − a₃†a₃)`.
//!
//! The two-mode squeeze `α₂ = cosh ξ a₂ + sinh ξ a₃†`,
//! `α₃ = cosh ξ a₃ + sinh ξ a₂†` followed by `α_{Σ,Δ} = (α₂ ± α₃)/√2` turns it
//! into the passive chain `𝒢 a₁†α_Σ + (Ω/2) α_Σ†α_Δ + h.c.` with
//! `𝒢 = √2 √(G_bs² − G_sq²)` and `tanh ξ = G_sq/G_bs`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::{bracket_max, golden_section_max, logspace};
use crate::budget::{compute_budget, verify_sum_rules, SumRuleReport};
use crate::error::{Error, Result};
use crate::linalg::matrix::{CMatrix, C64};
use crate::network::{
    build_state_space, transform_spec, BathSpec, NetworkSpec, SymplecticMap,
};
use crate::steady::{steady_covariance, InputMoments};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeModeParams {
    /// Frame coupling `𝒢` between the cavity and `α_Σ`.
    pub g_script: f64,
    /// Squeezing parameter `ξ`.
    pub xi: f64,
    /// Mechanical frequency difference `Ω`.
    pub omega: f64,
    /// Cavity linewidth `κ`.
    pub kappa: f64,
    /// Damping shared by both mechanical modes.
    pub gamma_m: f64,
    #[serde(default)]
    pub n_o: f64,
    #[serde(default)]
    pub n_m: f64,
}

impl ThreeModeParams {
    /// From the sideband drives: `G_bs` (beam splitter) must exceed `G_sq`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_drives(
        g_sq: f64,
        g_bs: f64,
        omega: f64,
        kappa: f64,
        gamma_m: f64,
        n_o: f64,
        n_m: f64,
    ) -> Result<Self> {
        let (g, xi) = crate::network::squeeze_parameter(g_sq, g_bs)?;
        Ok(ThreeModeParams {
            g_script: std::f64::consts::SQRT_2 * g,
            xi,
            omega,
            kappa,
            gamma_m,
            n_o,
            n_m,
        })
    }

    pub fn with_occupancies(mut self, n_o: f64, n_m: f64) -> Self {
        self.n_o = n_o;
        self.n_m = n_m;
        self
    }

    /// `(G_bs, G_sq)` of the physical drives.
    pub fn drives(&self) -> (f64, f64) {
        let g = self.g_script * FRAC_1_SQRT_2;
        (g * self.xi.cosh(), g * self.xi.sinh())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kappa", self.kappa), ("gamma_m", self.gamma_m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("g_script", self.g_script), ("xi", self.xi), ("n_o", self.n_o), ("n_m", self.n_m)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !self.omega.is_finite() {
            return Err(Error::InvalidSpec("omega must be finite".into()));
        }
        Ok(())
    }

    /// Network in the physical frame, modes `(1, 2, 3)`.
    pub fn physical_spec(&self) -> NetworkSpec {
        let (bs, sq) = self.drives();
        let (bs, sq) = (C64::new(bs, 0.0), C64::new(sq, 0.0));
        NetworkSpec::new(vec![
            BathSpec::thermal(self.kappa, self.n_o),
            BathSpec::thermal(self.gamma_m, self.n_m),
            BathSpec::thermal(self.gamma_m, self.n_m),
        ])
        .beam_splitter(0, 1, bs)
        .beam_splitter(0, 2, bs)
        .two_mode_squeeze(0, 1, sq)
        .two_mode_squeeze(0, 2, sq)
        .detuning(1, 0.5 * self.omega)
        .detuning(2, -0.5 * self.omega)
        .with_labels(&["cavity", "mech2", "mech3"])
    }

    /// Two-mode squeeze of the mechanics followed by the Σ/Δ rotation.
    pub fn frame_map(&self) -> SymplecticMap {
        let r = FRAC_1_SQRT_2;
        let u = CMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, r, r], [0.0, r, -r]]);
        SymplecticMap::two_mode_squeeze(3, 1, 2, self.xi)
            .then(&SymplecticMap::passive(&u).expect("rotation is unitary"))
    }

    /// Network in the passive frame, modes `(1, Σ, Δ)`.
    pub fn frame_spec(&self) -> Result<NetworkSpec> {
        let mut spec = transform_spec(&self.physical_spec(), &self.frame_map())?;
        spec.labels = Some(vec!["cavity".into(), "sigma".into(), "delta".into()]);
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeModeBudget {
    /// `I_ij` over `(1, Σ, Δ)`.
    pub transfer: Vec<Vec<f64>>,
    /// `(κ/γ_m)(1 − I₁₁)`.
    pub eta_e: f64,
    pub sum_rules: SumRuleReport,
}

pub fn three_mode_budget(p: &ThreeModeParams) -> Result<ThreeModeBudget> {
    p.validate()?;
    let ss = build_state_space(&p.frame_spec()?)?;
    let b = compute_budget(&ss)?;
    let sum_rules = verify_sum_rules(&b)?;
    Ok(ThreeModeBudget {
        eta_e: p.kappa / p.gamma_m * (1.0 - b.transfer[0][0]),
        transfer: b.transfer,
        sum_rules,
    })
}

/// `η_e` as a function of the frame coupling alone.
pub fn eta_e(g_script: f64, omega: f64, kappa: f64, gamma_m: f64) -> Result<f64> {
    let p = ThreeModeParams {
        g_script,
        xi: 0.0,
        omega,
        kappa,
        gamma_m,
        n_o: 0.0,
        n_m: 0.0,
    };
    Ok(three_mode_budget(&p)?.eta_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuanResult {
    /// `ΔX_Σ² + ΔP_Δ²` from the physical-frame covariance.
    pub direct: f64,
    /// Transfer-integral expression evaluated in the passive frame.
    pub budget: f64,
    pub eta_e: f64,
    /// `direct < 1`.
    pub entangled: bool,
}

pub fn duan_quantity(p: &ThreeModeParams) -> Result<DuanResult> {
    p.validate()?;
    let spec = p.physical_spec();
    let cs = steady_covariance(&build_state_space(&spec)?, &InputMoments::from_baths(&spec))?;
    let q = cs.quadrature_covariance();
    let (x2, p2, x3, p3) = (2, 3, 4, 5);
    let var_x_sigma = 0.5 * (q[x2][x2] + q[x3][x3] + 2.0 * q[x2][x3]);
    let var_p_delta = 0.5 * (q[p2][p2] + q[p3][p3] - 2.0 * q[p2][p3]);
    let direct = var_x_sigma + var_p_delta;

    let tb = three_mode_budget(p)?;
    let i = &tb.transfer;
    let (s, d) = (1, 2);
    let budget = (i[d][s] + i[d][d] + i[s][s] + i[s][d]) * (p.n_m + 0.5)
        + (i[d][0] + i[s][0]) * (p.n_o + 0.5) * (-2.0 * p.xi).exp();
    Ok(DuanResult {
        direct,
        budget,
        eta_e: tb.eta_e,
        entangled: direct < 1.0,
    })
}

/// `n_m = slope · (n_o − n̄_o)` separating entangled from separable states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLine {
    pub xi: f64,
    pub eta_e: f64,
    /// `−η_e e^{−2ξ}/(2 − η_e)`.
    pub slope: f64,
    /// `(e^{2ξ} − 1)/2`.
    pub n_o_intercept: f64,
    /// `η_e (1 − e^{−2ξ}) / (2(2 − η_e))`.
    pub n_m_intercept: f64,
    /// Both intercepts vanish (no squeezing or no transfer).
    pub degenerate: bool,
}

impl BoundaryLine {
    pub fn n_m_at(&self, n_o: f64) -> f64 {
        self.slope * (n_o - self.n_o_intercept)
    }

    /// Point of the line closest to the origin.
    pub fn foot(&self) -> (f64, f64) {
        // line: slope·n_o − n_m = slope·n̄_o
        let (a, b, c) = (self.slope, -1.0, self.slope * self.n_o_intercept);
        let k = c / (a * a + b * b);
        (a * k, b * k)
    }
}

pub fn separability_boundary(xi: f64, eta_e: f64) -> Result<BoundaryLine> {
    if !(0.0..2.0).contains(&eta_e) {
        return Err(Error::NotApplicable(format!(
            "boundary needs 0 <= eta_e < 2, got {eta_e}"
        )));
    }
    let e = (-2.0 * xi).exp();
    let n_o_intercept = 0.5 * ((2.0 * xi).exp() - 1.0);
    let n_m_intercept = eta_e * (1.0 - e) / (2.0 * (2.0 - eta_e));
    Ok(BoundaryLine {
        xi,
        eta_e,
        slope: -eta_e * e / (2.0 - eta_e),
        n_o_intercept,
        n_m_intercept,
        degenerate: n_o_intercept == 0.0 || n_m_intercept == 0.0,
    })
}

/// Duan verdicts just inside and just outside the boundary, at
/// `(1 ∓ rel_offset)` times the foot point (an offset along the normal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFlip {
    pub foot: (f64, f64),
    pub inner: DuanResult,
    pub outer: DuanResult,
    pub flips: bool,
}

pub fn boundary_flip(p: &ThreeModeParams, rel_offset: f64) -> Result<BoundaryFlip> {
    let eta = three_mode_budget(p)?.eta_e;
    let line = separability_boundary(p.xi, eta)?;
    if line.degenerate {
        return Err(Error::NotApplicable("degenerate boundary".into()));
    }
    let foot = line.foot();
    let at = |f: f64| duan_quantity(&p.with_occupancies(foot.0 * f, foot.1 * f));
    let inner = at(1.0 - rel_offset)?;
    let outer = at(1.0 + rel_offset)?;
    Ok(BoundaryFlip {
        foot,
        inner,
        outer,
        flips: inner.entangled && !outer.entangled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalCoupling {
    /// `((Ω/2)√(κ² + 4Ω²))^{1/2}`.
    pub g_formula: f64,
    pub g_numeric: f64,
    pub eta_formula: f64,
    pub eta_numeric: f64,
}

const G_REL_TOL: f64 = 1e-6;

pub fn optimal_coupling(kappa: f64, omega: f64, gamma_m: f64) -> Result<OptimalCoupling> {
    if !(kappa > 0.0 && omega > 0.0 && gamma_m > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "rates must be positive, got kappa={kappa}, omega={omega}, gamma_m={gamma_m}"
        )));
    }
    let g_formula = (0.5 * omega * (kappa * kappa + 4.0 * omega * omega).sqrt()).sqrt();
    // the frame chain is passive and fully damped, hence stable for every 𝒢;
    // failed evaluations are treated as outside the stability interval
    let mut f = |g: f64| eta_e(g, omega, kappa, gamma_m).unwrap_or(f64::NEG_INFINITY);
    let scale = kappa.max(omega).max(gamma_m);
    let grid = logspace(1e-4 * scale, 1e4 * scale, 161);
    let (lo, hi) = bracket_max(&mut f, &grid);
    let (g_numeric, eta_numeric) = golden_section_max(&mut f, lo, hi, G_REL_TOL);
    if !eta_numeric.is_finite() {
        return Err(Error::NotApplicable("empty stability interval".into()));
    }
    Ok(OptimalCoupling {
        g_formula,
        g_numeric,
        eta_formula: eta_e(g_formula, omega, kappa, gamma_m)?,
        eta_numeric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ThreeModeParams {
        ThreeModeParams {
            g_script: 1.0,
            xi: 0.5,
            omega: 1.0,
            kappa: 1.0,
            gamma_m: 0.01,
            n_o: 0.0,
            n_m: 0.0,
        }
    }

    #[test]
    fn frame_is_a_passive_chain() {
        let spec = base().frame_spec().unwrap();
        assert!(crate::network::is_passive(&spec));
        let ss = build_state_space(&spec).unwrap();
        let a = ss.annihilation_block();
        assert!((a[(0, 1)].norm() - 1.0).abs() < 1e-12);
        assert!((a[(1, 2)].norm() - 0.5).abs() < 1e-12);
        assert!(a[(0, 2)].norm() < 1e-12);
        // vacuum inputs acquire opposite anomalous moments on Σ and Δ
        let m_s = spec.baths[1].anomalous();
        let m_d = spec.baths[2].anomalous();
        assert!((m_s.re - 0.5 * 1.0f64.sinh()).abs() < 1e-12);
        assert!((m_s + m_d).norm() < 1e-12);
    }

    #[test]
    fn drives_round_trip() {
        let p = ThreeModeParams::from_drives(0.3, 1.0, 1.0, 1.0, 0.01, 0.0, 0.0).unwrap();
        let (bs, sq) = p.drives();
        assert!((bs - 1.0).abs() < 1e-14 && (sq - 0.3).abs() < 1e-14);
        assert!((p.g_script - (2.0f64 * 0.91).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn decoupled_cavity() {
        let p = ThreeModeParams {
            g_script: 0.0,
            ..base()
        };
        let tb = three_mode_budget(&p).unwrap();
        assert!((tb.transfer[0][0] - 1.0).abs() < 1e-14);
        assert!(tb.eta_e.abs() < 1e-12);
    }

    #[test]
    fn zero_splitting_decouples_delta() {
        let p = ThreeModeParams {
            omega: 0.0,
            ..base()
        };
        let i = three_mode_budget(&p).unwrap().transfer;
        assert!(i[2][0].abs() < 1e-14 && i[2][1].abs() < 1e-14);
        assert!((i[2][2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn regression_point() {
        let tb = three_mode_budget(&base()).unwrap();
        assert!(tb.eta_e > 0.0 && tb.eta_e < 2.0);
        assert!(tb.sum_rules.passed, "{:?}", tb.sum_rules);
        let d = duan_quantity(&base()).unwrap();
        assert!((d.direct - d.budget).abs() < 1e-8);
        assert!(d.entangled);
    }

    #[test]
    fn trivial_duan_values() {
        let p = ThreeModeParams {
            g_script: 0.0,
            xi: 0.0,
            ..base()
        };
        let d = duan_quantity(&p).unwrap();
        assert!((d.direct - 1.0).abs() < 1e-10 && (d.budget - 1.0).abs() < 1e-10);
        for g in [0.3, 1.0, 4.0] {
            let d = duan_quantity(&ThreeModeParams {
                g_script: g,
                xi: 0.0,
                ..base()
            })
            .unwrap();
            assert!(d.direct >= 1.0 - 1e-10, "{d:?}");
        }
    }

    #[test]
    fn boundary_formulas() {
        let l = separability_boundary(0.5, 1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((l.n_o_intercept - (e - 1.0) / 2.0).abs() < 1e-15);
        assert!((l.slope + 1.0 / e).abs() < 1e-15);
        assert!((l.n_m_intercept - (1.0 - 1.0 / e) / 2.0).abs() < 1e-15);
        assert!((l.n_m_at(0.0) - l.n_m_intercept).abs() < 1e-15);
        let (fo, fm) = l.foot();
        assert!((l.n_m_at(fo) - fm).abs() < 1e-15);

        let flat = separability_boundary(0.0, 1.0).unwrap();
        assert!(flat.degenerate && flat.n_o_intercept == 0.0);
        assert!(separability_boundary(0.5, 0.0).unwrap().slope == 0.0);
        assert!(matches!(
            separability_boundary(0.5, 2.0),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn boundary_verdict_flips() {
        let f = boundary_flip(&base(), 0.05).unwrap();
        assert!(f.flips, "{f:?}");
    }

    #[test]
    fn optimal_coupling_formula() {
        let o = optimal_coupling(1.0, 1.0, 0.001).unwrap();
        assert!((o.g_formula.powi(2) - 0.5 * 5f64.sqrt()).abs() < 1e-15);
        assert!((o.g_formula - 1.057_371).abs() < 1e-6);
        assert!(o.eta_formula >= 0.99 * o.eta_numeric, "{o:?}");
        assert!(o.eta_numeric >= o.eta_formula);
    }
}
