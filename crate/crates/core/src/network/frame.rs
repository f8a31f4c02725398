//! Symplectic (Bogoliubov) changes of frame in doubled space.

use super::state_space::{build_state_space, sigma, StateSpace};
use super::{BathSpec, CouplingKind, CouplingTerm, NetworkSpec};
use crate::error::{Error, Result};
use crate::linalg::matrix::{CMatrix, C64, I, ZERO};
use crate::steady::InputMoments;

const FRAME_TOL: f64 = 1e-12;

/// Linear map `ξ' = S ξ` on doubled-space operators that preserves the
/// commutator metric, `S Σ S† = Σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    s: CMatrix,
}

impl SymplecticMap {
    pub fn identity(n_modes: usize) -> Self {
        SymplecticMap {
            s: CMatrix::identity(2 * n_modes),
        }
    }

    /// Checked constructor.
    pub fn new(s: CMatrix) -> Result<Self> {
        let d = s.ensure_square()?;
        if d % 2 != 0 {
            return Err(Error::dim("even dimension", d));
        }
        let sig = sigma(d / 2);
        let r = (&(&s * &sig) * &s.adjoint()).max_abs_diff(&sig);
        if r > 1e-10 * s.max_abs().powi(2).max(1.0) {
            return Err(Error::Frame(format!(
                "map does not preserve commutators (residual {r:e})"
            )));
        }
        Ok(SymplecticMap { s })
    }

    /// `α_k = cosh(ξ) a_k + sinh(ξ) a_k†`.
    pub fn single_mode_squeeze(n_modes: usize, mode: usize, xi: f64) -> Self {
        let mut s = CMatrix::identity(2 * n_modes);
        let (c, sh) = (C64::new(xi.cosh(), 0.0), C64::new(xi.sinh(), 0.0));
        s[(mode, mode)] = c;
        s[(mode, n_modes + mode)] = sh;
        s[(n_modes + mode, mode)] = sh;
        s[(n_modes + mode, n_modes + mode)] = c;
        SymplecticMap { s }
    }

    /// `α_i = cosh(ξ) a_i + sinh(ξ) a_j†`, `α_j = cosh(ξ) a_j + sinh(ξ) a_i†`.
    pub fn two_mode_squeeze(n_modes: usize, i: usize, j: usize, xi: f64) -> Self {
        let mut s = CMatrix::identity(2 * n_modes);
        let (c, sh) = (C64::new(xi.cosh(), 0.0), C64::new(xi.sinh(), 0.0));
        let n = n_modes;
        s[(i, i)] = c;
        s[(j, j)] = c;
        s[(n + i, n + i)] = c;
        s[(n + j, n + j)] = c;
        s[(i, n + j)] = sh;
        s[(j, n + i)] = sh;
        s[(n + i, j)] = sh;
        s[(n + j, i)] = sh;
        SymplecticMap { s }
    }

    /// Passive mode mixing `a' = U a` for unitary `U`.
    pub fn passive(u: &CMatrix) -> Result<Self> {
        let n = u.ensure_square()?;
        let mut s = CMatrix::zeros(2 * n, 2 * n);
        s.set_block(0, 0, u);
        s.set_block(n, n, &u.conj());
        Self::new(s)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.s
    }

    pub fn n_modes(&self) -> usize {
        self.s.rows() / 2
    }

    /// Map applying `self` first, then `next`.
    pub fn then(&self, next: &SymplecticMap) -> SymplecticMap {
        SymplecticMap {
            s: &next.s * &self.s,
        }
    }

    /// `S⁻¹ = Σ S† Σ`.
    pub fn inverse(&self) -> SymplecticMap {
        let sig = sigma(self.n_modes());
        SymplecticMap {
            s: &(&sig * &self.s.adjoint()) * &sig,
        }
    }

    /// Drift `S Ā S⁻¹`; the input matrix must be left invariant, i.e. the
    /// map only mixes channels of equal damping.
    pub fn apply(&self, ss: &StateSpace) -> Result<StateSpace> {
        if ss.dim() != self.s.rows() {
            return Err(Error::dim(self.s.rows(), ss.dim()));
        }
        let inv = self.inverse();
        let drift = &(&self.s * &ss.drift) * &inv.s;
        let input = &(&self.s * &ss.input) * &inv.s;
        if input.max_abs_diff(&ss.input) > FRAME_TOL * ss.input.max_abs().max(1.0) {
            return Err(Error::Frame(
                "map mixes input channels with different damping rates".into(),
            ));
        }
        Ok(StateSpace::from_parts(drift, ss.input.clone()))
    }

    /// Symmetrized noise matrix of the transformed inputs, `S N S†`.
    pub fn transform_noise(&self, noise: &CMatrix) -> CMatrix {
        &(&self.s * noise) * &self.s.adjoint()
    }
}

/// `(𝒢, ξ)` with `𝒢 = √(G₋² − G₊²)` and `ξ = artanh(G₊/G₋)`.
pub fn squeeze_parameter(g_plus: f64, g_minus: f64) -> Result<(f64, f64)> {
    if g_plus.abs() >= g_minus.abs() {
        return Err(Error::Frame(format!(
            "|G+| = {} >= |G-| = {}: no hyperbolic frame, system potentially unstable",
            g_plus.abs(),
            g_minus.abs()
        )));
    }
    Ok((
        (g_minus * g_minus - g_plus * g_plus).sqrt(),
        (g_plus / g_minus).atanh(),
    ))
}

/// Re-expresses `spec` in the frame `α = cosh(ξ) a_mode + sinh(ξ) a_mode†`.
/// The returned map carries the original bath moments into the new frame.
pub fn bogoliubov_frame(
    spec: &NetworkSpec,
    mode: usize,
    xi: f64,
) -> Result<(NetworkSpec, SymplecticMap)> {
    if mode >= spec.n_modes {
        return Err(Error::InvalidSpec(format!(
            "mode {mode} out of range (N = {})",
            spec.n_modes
        )));
    }
    let map = SymplecticMap::single_mode_squeeze(spec.n_modes, mode, xi);
    let out = transform_spec(spec, &map)?;
    Ok((out, map))
}

/// Finds the ξ that removes every `a_mode†` coupling from the other modes'
/// equations and applies it. Requires a common real ratio
/// `G₊/G₋ ∈ (−1, 1)` across all partners of `mode`.
pub fn passive_frame(spec: &NetworkSpec, mode: usize) -> Result<(NetworkSpec, SymplecticMap, f64)> {
    let ss = build_state_space(spec)?;
    let n = spec.n_modes;
    let scale = ss.drift.max_abs().max(1.0);
    let mut ratio: Option<C64> = None;
    for p in (0..n).filter(|&p| p != mode) {
        let x = ss.drift[(p, mode)];
        let y = ss.drift[(p, n + mode)];
        if y.norm() <= FRAME_TOL * scale {
            if x.norm() > FRAME_TOL * scale {
                ratio = Some(check_ratio(ratio, ZERO)?);
            }
            continue;
        }
        if x.norm() <= FRAME_TOL * scale {
            return Err(Error::Frame(format!(
                "mode {p} couples to mode {mode} by squeezing only (|G+| >= |G-|)"
            )));
        }
        ratio = Some(check_ratio(ratio, y / x)?);
    }
    let t = ratio.unwrap_or(ZERO);
    if t.im.abs() > 1e-12 {
        return Err(Error::Frame(
            "squeeze and beam-splitter phases differ; no real squeezing parameter".into(),
        ));
    }
    if t.re.abs() >= 1.0 {
        return Err(Error::Frame(format!(
            "|G+/G-| = {} >= 1: no hyperbolic frame, system potentially unstable",
            t.re.abs()
        )));
    }
    let xi = t.re.atanh();
    let (out, map) = bogoliubov_frame(spec, mode, xi)?;
    Ok((out, map, xi))
}

fn check_ratio(prev: Option<C64>, next: C64) -> Result<C64> {
    match prev {
        Some(p) if (p - next).norm() > 1e-12 => Err(Error::Frame(
            "partners need different squeezing parameters".into(),
        )),
        _ => Ok(next),
    }
}

/// Applies `map` to the network and its bath moments. Fails when the
/// transformed inputs acquire cross-channel correlations, which a
/// per-mode [`BathSpec`] cannot carry.
pub fn transform_spec(spec: &NetworkSpec, map: &SymplecticMap) -> Result<NetworkSpec> {
    let ss = map.apply(&build_state_space(spec)?)?;
    let moments = InputMoments::from_baths(spec).transform(map);
    if !moments.is_uncorrelated(FRAME_TOL) {
        return Err(Error::Frame(
            "transformed inputs are correlated across channels".into(),
        ));
    }
    let baths: Vec<BathSpec> = spec
        .baths
        .iter()
        .enumerate()
        .map(|(j, b)| BathSpec::thermal(b.gamma, moments.occupancy(j)).with_anomalous(moments.anomalous(j)))
        .collect();
    let mut out = spec_from_state_space(&ss, baths)?;
    out.labels = spec.labels.clone();
    Ok(out)
}

/// Reads coupling terms back off a doubled drift. The diagonal dissipation
/// is taken from `baths`.
pub fn spec_from_state_space(ss: &StateSpace, baths: Vec<BathSpec>) -> Result<NetworkSpec> {
    let n = ss.n_modes();
    if baths.len() != n {
        return Err(Error::dim(n, baths.len()));
    }
    let scale = ss.drift.max_abs().max(1.0);
    let tol = FRAME_TOL * scale;
    if ss.conjugation_symmetry_residual() > tol {
        return Err(Error::Frame("drift lacks doubled-space symmetry".into()));
    }
    let mut h = ss.annihilation_block();
    for (j, b) in baths.iter().enumerate() {
        h[(j, j)] += C64::new(0.5 * b.gamma, 0.0);
    }
    // A_aa = −Γ/2 − iH  →  H = i(A_aa + Γ/2)
    let h = h.scale(I);
    if h.hermitian_residual() > tol {
        return Err(Error::Frame(
            "annihilation block is not damping plus a Hermitian coupling".into(),
        ));
    }
    // A_ab = −iΛ for two-mode terms; diagonal holds −η/2
    let ab = ss.anomalous_block();
    let lambda = ab.scale(I);
    if lambda.max_abs_diff(&lambda.transpose()) > tol {
        return Err(Error::Frame("anomalous block is not symmetric".into()));
    }

    let mut couplings = Vec::new();
    let keep = |z: C64| z.norm() > tol;
    for i in 0..n {
        if keep(h[(i, i)]) {
            couplings.push(CouplingTerm::new(
                CouplingKind::Detuning,
                C64::new(h[(i, i)].re, 0.0),
                vec![i],
            ));
        }
        if keep(ab[(i, i)]) {
            couplings.push(CouplingTerm::new(
                CouplingKind::DegenerateParametric,
                ab[(i, i)] * -2.0,
                vec![i],
            ));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if keep(h[(i, j)]) {
                couplings.push(CouplingTerm::new(
                    CouplingKind::BeamSplitter,
                    h[(i, j)],
                    vec![i, j],
                ));
            }
            if keep(lambda[(i, j)]) {
                couplings.push(CouplingTerm::new(
                    CouplingKind::TwoModeSqueeze,
                    lambda[(i, j)],
                    vec![i, j],
                ));
            }
        }
    }
    let spec = NetworkSpec {
        n_modes: n,
        baths,
        couplings,
        labels: None,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::is_passive;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn squeezer(g_plus: f64, g_minus: f64) -> NetworkSpec {
        NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2])
            .beam_splitter(0, 1, c(g_minus))
            .two_mode_squeeze(0, 1, c(g_plus))
    }

    #[test]
    fn squeeze_parameter_values() {
        let (g, xi) = squeeze_parameter(0.5, 1.0).unwrap();
        assert!((g - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((xi - 0.549_306_144_334_054_9).abs() < 1e-15);
        assert!(matches!(squeeze_parameter(1.0, 1.0), Err(Error::Frame(_))));
    }

    #[test]
    fn identity_frame_without_squeezing() {
        let spec = squeezer(0.0, 1.0);
        let (out, _, xi) = passive_frame(&spec, 1).unwrap();
        assert_eq!(xi, 0.0);
        // the zero-amplitude squeeze term is dropped
        let want = NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2]).beam_splitter(0, 1, c(1.0));
        assert_eq!(out, want);
    }

    #[test]
    fn squeezer_becomes_beam_splitter() {
        let spec = squeezer(0.5, 1.0);
        assert!(!is_passive(&spec));
        let (out, _, xi) = passive_frame(&spec, 1).unwrap();
        assert!((xi - 0.5f64.atanh()).abs() < 1e-15);
        assert!(is_passive(&out));
        assert_eq!(out.couplings.len(), 1);
        let t = &out.couplings[0];
        assert_eq!(t.kind, CouplingKind::BeamSplitter);
        assert!((t.amplitude() - c(0.75f64.sqrt())).norm() < 1e-12);
        // vacuum bath seen from the Bogoliubov mode
        let sh = xi.sinh();
        assert!((out.baths[1].n - sh * sh).abs() < 1e-12);
        assert!((out.baths[1].anomalous() - c(xi.cosh() * sh)).norm() < 1e-12);
        assert!((out.baths[1].n - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn frame_error_when_squeeze_dominates() {
        assert!(matches!(
            passive_frame(&squeezer(1.0, 0.5), 1),
            Err(Error::Frame(_))
        ));
    }

    #[test]
    fn frames_compose_additively() {
        let spec = squeezer(0.3, 1.0).detuning(1, 0.2).parametric(0, c(0.1));
        let ss = build_state_space(&spec).unwrap();
        let (xa, xb) = (0.37, -0.81);
        let two_step = SymplecticMap::single_mode_squeeze(2, 1, xa)
            .then(&SymplecticMap::single_mode_squeeze(2, 1, xb));
        let direct = SymplecticMap::single_mode_squeeze(2, 1, xa + xb);
        let d1 = two_step.apply(&ss).unwrap().drift;
        let d2 = direct.apply(&ss).unwrap().drift;
        assert!(d1.approx_eq(&d2, 1e-12));
        // and through spec round trips
        let (s1, _) = bogoliubov_frame(&spec, 1, xa).unwrap();
        let (s2, _) = bogoliubov_frame(&s1, 1, xb).unwrap();
        let (s3, _) = bogoliubov_frame(&spec, 1, xa + xb).unwrap();
        let d2 = build_state_space(&s2).unwrap().drift;
        let d3 = build_state_space(&s3).unwrap().drift;
        assert!(d2.approx_eq(&d3, 1e-12));
    }

    #[test]
    fn map_inverse_and_metric() {
        let m = SymplecticMap::two_mode_squeeze(3, 1, 2, 0.7);
        let back = m.then(&m.inverse());
        assert!(back.matrix().approx_eq(&CMatrix::identity(6), 1e-12));
        assert!(SymplecticMap::new(m.matrix().clone()).is_ok());
        let bad = CMatrix::identity(2).scale_real(2.0);
        assert!(SymplecticMap::new(bad).is_err());
    }

    #[test]
    fn rejects_mixing_different_dampings() {
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0), BathSpec::vacuum(2.0)]);
        let ss = build_state_space(&spec).unwrap();
        let m = SymplecticMap::two_mode_squeeze(2, 0, 1, 0.3);
        assert!(matches!(m.apply(&ss), Err(Error::Frame(_))));
    }
}
