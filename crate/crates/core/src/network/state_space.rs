use serde::{Deserialize, Serialize};

use super::{CouplingKind, NetworkSpec};
use crate::error::Result;
use crate::linalg::matrix::{CMatrix, C64, I, ZERO};

/// Doubled-space linear dynamics. Index `j < N` is `a_j`, `N + j` is `a_j†`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub drift: CMatrix,
    pub input: CMatrix,
    pub sigma: CMatrix,
    n_modes: usize,
}

impl StateSpace {
    /// Assembles a state space from raw matrices. No structural checks;
    /// use [`check_physical_realizability`] on the result.
    pub fn from_parts(drift: CMatrix, input: CMatrix) -> Self {
        let dim = drift.rows();
        let n_modes = dim / 2;
        StateSpace {
            drift,
            input,
            sigma: sigma(n_modes),
            n_modes,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    /// Damping rates read back from the input matrix, γ_j = |D_jj|².
    pub fn gammas(&self) -> Vec<f64> {
        (0..self.n_modes)
            .map(|j| self.input[(j, j)].norm_sqr())
            .collect()
    }

    /// `D_i Σ D_i†` for channel `i`: both columns `i` and `N + i`.
    pub fn channel_noise(&self, channel: usize) -> CMatrix {
        let n = self.n_modes;
        let d = self.dim();
        let di = CMatrix::from_fn(d, 2, |r, c| {
            let col = if c == 0 { channel } else { n + channel };
            self.input[(r, col)]
        });
        let s = CMatrix::from_real_diagonal(&[1.0, -1.0]);
        &(&di * &s) * &di.adjoint()
    }

    /// Upper-left N×N block of the drift.
    pub fn annihilation_block(&self) -> CMatrix {
        self.drift.block(0, 0, self.n_modes, self.n_modes)
    }

    /// Upper-right N×N block (coefficients of `a†` in `ȧ`).
    pub fn anomalous_block(&self) -> CMatrix {
        self.drift.block(0, self.n_modes, self.n_modes, self.n_modes)
    }

    /// No a ↔ a† mixing in the drift.
    pub fn is_passive(&self) -> bool {
        self.anomalous_block().max_abs() <= 1e-12 * self.drift.max_abs().max(1.0)
    }

    /// `A + A† = −diag(γ)` on the annihilation sector.
    pub fn has_diagonal_dissipation(&self) -> bool {
        let a = self.annihilation_block();
        let herm = &a + &a.adjoint();
        let target = CMatrix::from_real_diagonal(
            &self.gammas().iter().map(|g| -g).collect::<Vec<_>>(),
        );
        herm.max_abs_diff(&target) <= 1e-12 * self.drift.max_abs().max(1.0)
    }

    /// Lower-right block is the conjugate of the upper-left one and the
    /// off-diagonal blocks are mutual conjugates.
    pub fn conjugation_symmetry_residual(&self) -> f64 {
        let n = self.n_modes;
        let aa = self.drift.block(0, 0, n, n);
        let ab = self.drift.block(0, n, n, n);
        let ba = self.drift.block(n, 0, n, n);
        let bb = self.drift.block(n, n, n, n);
        bb.max_abs_diff(&aa.conj()).max(ba.max_abs_diff(&ab.conj()))
    }
}

pub fn sigma(n_modes: usize) -> CMatrix {
    let mut d = vec![1.0; n_modes];
    d.extend(std::iter::repeat_n(-1.0, n_modes));
    CMatrix::from_real_diagonal(&d)
}

pub fn build_state_space(spec: &NetworkSpec) -> Result<StateSpace> {
    spec.validate()?;
    let n = spec.n_modes;
    let mut aa = CMatrix::zeros(n, n);
    let mut ab = CMatrix::zeros(n, n);
    for (j, b) in spec.baths.iter().enumerate() {
        aa[(j, j)] += C64::new(-0.5 * b.gamma, 0.0);
    }
    for c in &spec.couplings {
        let amp = c.amplitude();
        match c.kind {
            CouplingKind::BeamSplitter => {
                let (i, j) = (c.modes[0], c.modes[1]);
                aa[(i, j)] += -I * amp;
                aa[(j, i)] += -I * amp.conj();
            }
            CouplingKind::TwoModeSqueeze => {
                let (i, j) = (c.modes[0], c.modes[1]);
                ab[(i, j)] += -I * amp;
                ab[(j, i)] += -I * amp;
            }
            CouplingKind::Detuning => {
                let i = c.modes[0];
                aa[(i, i)] += -I * amp;
            }
            CouplingKind::DegenerateParametric => {
                let i = c.modes[0];
                ab[(i, i)] += amp * -0.5;
            }
        }
    }
    let mut drift = CMatrix::zeros(2 * n, 2 * n);
    drift.set_block(0, 0, &aa);
    drift.set_block(0, n, &ab);
    drift.set_block(n, 0, &ab.conj());
    drift.set_block(n, n, &aa.conj());

    let mut d = vec![ZERO; 2 * n];
    for (j, b) in spec.baths.iter().enumerate() {
        d[j] = C64::new(b.gamma.sqrt(), 0.0);
        d[n + j] = d[j];
    }
    Ok(StateSpace::from_parts(drift, CMatrix::from_diagonal(&d)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrReport {
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Residual of `ĀΣ + ΣĀ† + DΣD† = 0`.
pub fn check_physical_realizability(ss: &StateSpace, tol: f64) -> PrReport {
    let a = &ss.drift;
    let s = &ss.sigma;
    let d = &ss.input;
    let r = &(&(a * s) + &(s * &a.adjoint())) + &(&(d * s) * &d.adjoint());
    let residual = r.max_abs();
    PrReport {
        residual,
        tol,
        passed: residual <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{is_passive, BathSpec};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn single_mode_blocks() {
        let ss = build_state_space(&NetworkSpec::new(vec![BathSpec::vacuum(1.0)])).unwrap();
        assert_eq!(ss.annihilation_block()[(0, 0)], c(-0.5));
        assert_eq!(ss.input[(0, 0)], c(1.0));
        assert_eq!(ss.input[(1, 1)], c(1.0));
    }

    #[test]
    fn beam_splitter_block() {
        let spec =
            NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2]).beam_splitter(0, 1, c(0.5));
        let ss = build_state_space(&spec).unwrap();
        let want = CMatrix::from_rows(&[
            [c(-0.5), C64::new(0.0, -0.5)],
            [C64::new(0.0, -0.5), c(-0.5)],
        ]);
        assert!(ss.annihilation_block().approx_eq(&want, 0.0));
        assert!(ss.is_passive());
        assert!(ss.has_diagonal_dissipation());
        // passive: block diagonal doubled drift
        assert_eq!(ss.anomalous_block().max_abs(), 0.0);
    }

    #[test]
    fn pr_holds_by_construction() {
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0), BathSpec::thermal(3.0, 1.0)])
            .beam_splitter(0, 1, C64::new(0.3, -0.7))
            .two_mode_squeeze(0, 1, C64::new(0.2, 0.1))
            .detuning(1, 0.4)
            .parametric(0, C64::new(0.1, 0.3));
        let ss = build_state_space(&spec).unwrap();
        let pr = check_physical_realizability(&ss, 1e-12);
        assert!(pr.passed, "{pr:?}");
        assert_eq!(ss.conjugation_symmetry_residual(), 0.0);
        assert!(!is_passive(&spec));
    }

    #[test]
    fn missing_noise_port_violates_pr() {
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0), BathSpec::vacuum(2.5)]);
        let ss = build_state_space(&spec).unwrap();
        let broken = StateSpace::from_parts(ss.drift.clone(), CMatrix::zeros(4, 4));
        let pr = check_physical_realizability(&broken, 1e-12);
        assert!(!pr.passed);
        assert!((pr.residual - 2.5).abs() < 1e-15);
    }

    #[test]
    fn scaled_input_entry_violates_pr() {
        let spec =
            NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2]).beam_splitter(0, 1, c(0.5));
        let ss = build_state_space(&spec).unwrap();
        let mut d = ss.input.clone();
        d[(0, 0)] *= 1.1;
        let pr = check_physical_realizability(&StateSpace::from_parts(ss.drift.clone(), d), 1e-12);
        assert!(!pr.passed);
        assert!((pr.residual - 0.21).abs() < 1e-12, "{}", pr.residual);
    }

    #[test]
    fn parametric_quadrature_rates() {
        // single mode γ = 1, η = 1: X decays at (γ+η)/2 = 1, P is marginal
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0)]).parametric(0, c(1.0));
        let ss = build_state_space(&spec).unwrap();
        let spec = crate::linalg::eigenvalues(&ss.drift).unwrap();
        assert!(spec.eigenvalues[0].norm() < 1e-14);
        assert!((spec.eigenvalues[1] - c(-1.0)).norm() < 1e-14);
    }

    #[test]
    fn unstable_two_mode_squeezer_spectrum() {
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2]).two_mode_squeeze(0, 1, c(1.0));
        let ss = build_state_space(&spec).unwrap();
        let s = crate::linalg::eigenvalues(&ss.drift).unwrap();
        let re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        for (got, want) in re.iter().zip([0.5, 0.5, -1.5, -1.5]) {
            assert!((got - want).abs() < 1e-10, "{re:?}");
        }
        assert!(!crate::linalg::is_stable(&ss.drift, 0.0).unwrap());
    }
}
