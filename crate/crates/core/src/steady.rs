//! Stationary Gaussian covariance under white-noise inputs and quadrature
//! variances derived from it.
//!
//! Second moments are symmetrized, `V_jk = ½⟨{ξ_j, ξ_k†}⟩`, so a vacuum
//! quadrature has variance 1/2.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::budget::CommutatorBudget;
use crate::error::{Error, Result};
use crate::linalg::lyapunov::solve_lyapunov;
use crate::linalg::matrix::{CMatrix, C64, I, ZERO};
use crate::linalg::{eigenvalues, ensure_stable, Tolerances};
use crate::network::{NetworkSpec, StateSpace, SymplecticMap};

/// White-noise input moments: `normal[j][k] = ⟨a_j† a_k⟩`,
/// `anomalous[j][k] = ⟨a_j a_k⟩`, both per unit bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct InputMoments {
    normal: CMatrix,
    anomalous: CMatrix,
}

impl InputMoments {
    pub fn vacuum(n_modes: usize) -> Self {
        InputMoments {
            normal: CMatrix::zeros(n_modes, n_modes),
            anomalous: CMatrix::zeros(n_modes, n_modes),
        }
    }

    pub fn thermal(occupancies: &[f64]) -> Self {
        let n = occupancies.len();
        InputMoments {
            normal: CMatrix::from_real_diagonal(occupancies),
            anomalous: CMatrix::zeros(n, n),
        }
    }

    /// Uncorrelated channels with occupancy `n_j` and anomalous amplitude `m_j`.
    pub fn per_channel(occupancies: &[f64], anomalous: &[C64]) -> Result<Self> {
        if occupancies.len() != anomalous.len() {
            return Err(Error::dim(
                format!("{} anomalous amplitudes", occupancies.len()),
                anomalous.len().to_string(),
            ));
        }
        Ok(InputMoments {
            normal: CMatrix::from_real_diagonal(occupancies),
            anomalous: CMatrix::from_diagonal(anomalous),
        })
    }

    /// Checked constructor for correlated inputs.
    pub fn from_matrices(normal: CMatrix, anomalous: CMatrix) -> Result<Self> {
        let n = normal.ensure_square()?;
        if anomalous.rows() != n || anomalous.cols() != n {
            return Err(Error::dim(
                format!("{n}x{n}"),
                format!("{}x{}", anomalous.rows(), anomalous.cols()),
            ));
        }
        let scale = normal.max_abs().max(anomalous.max_abs()).max(1.0);
        let herm = normal.hermitian_residual();
        if herm > Tolerances::HERMITIAN * scale {
            return Err(Error::NotHermitian { residual: herm });
        }
        let sym = anomalous.max_abs_diff(&anomalous.transpose());
        if sym > Tolerances::HERMITIAN * scale {
            return Err(Error::InvalidSpec(format!(
                "anomalous moments must be symmetric (residual {sym:e})"
            )));
        }
        Ok(InputMoments { normal, anomalous })
    }

    /// Per-mode bath moments of a network spec.
    pub fn from_baths(spec: &NetworkSpec) -> Self {
        let n: Vec<f64> = spec.baths.iter().map(|b| b.n).collect();
        let m: Vec<C64> = spec.baths.iter().map(|b| b.anomalous()).collect();
        InputMoments {
            normal: CMatrix::from_real_diagonal(&n),
            anomalous: CMatrix::from_diagonal(&m),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.normal.rows()
    }

    pub fn normal(&self) -> &CMatrix {
        &self.normal
    }

    pub fn anomalous_matrix(&self) -> &CMatrix {
        &self.anomalous
    }

    pub fn occupancy(&self, j: usize) -> f64 {
        self.normal[(j, j)].re
    }

    pub fn anomalous(&self, j: usize) -> C64 {
        self.anomalous[(j, j)]
    }

    /// Symmetrized doubled-space moment matrix
    /// `[[n̄ + ½, m], [m̄, n + ½]]`.
    pub fn noise_matrix(&self) -> CMatrix {
        let n = self.n_modes();
        let half = CMatrix::identity(n).scale_real(0.5);
        let mut out = CMatrix::zeros(2 * n, 2 * n);
        out.set_block(0, 0, &(&self.normal.conj() + &half));
        out.set_block(0, n, &self.anomalous);
        out.set_block(n, 0, &self.anomalous.conj());
        out.set_block(n, n, &(&self.normal + &half));
        out
    }

    pub fn from_noise_matrix(noise: &CMatrix) -> Result<Self> {
        let d = noise.ensure_square()?;
        if d % 2 != 0 {
            return Err(Error::dim("even dimension", d.to_string()));
        }
        let n = d / 2;
        let half = CMatrix::identity(n).scale_real(0.5);
        Self::from_matrices(&noise.block(n, n, n, n) - &half, noise.block(0, n, n, n))
    }

    /// Moments of `S ξ_in`.
    pub fn transform(&self, map: &SymplecticMap) -> Self {
        let noise = map.transform_noise(&self.noise_matrix());
        let n = self.n_modes();
        let half = CMatrix::identity(n).scale_real(0.5);
        let normal = (&noise.block(n, n, n, n) - &half).hermitian_part();
        let ab = noise.block(0, n, n, n);
        let anomalous = CMatrix::from_fn(n, n, |i, j| 0.5 * (ab[(i, j)] + ab[(j, i)]));
        InputMoments { normal, anomalous }
    }

    /// No cross-channel correlators beyond `tol`.
    pub fn is_uncorrelated(&self, tol: f64) -> bool {
        let n = self.n_modes();
        (0..n).all(|i| {
            (0..n).all(|j| i == j || (self.normal[(i, j)].norm() <= tol && self.anomalous[(i, j)].norm() <= tol))
        })
    }

    pub fn has_anomalous(&self) -> bool {
        self.anomalous.max_abs() > 0.0
    }

    /// `ΔX²_{j,in}(θ) = n_j + ½ + Re(m_j e^{−2iθ})`.
    pub fn input_variance(&self, j: usize, theta: f64) -> f64 {
        self.occupancy(j) + 0.5 + (self.anomalous(j) * C64::from_polar(1.0, -2.0 * theta)).re
    }

    /// `min_θ ΔX²_{j,in}(θ) = n_j + ½ − |m_j|`.
    pub fn min_input_variance(&self, j: usize) -> f64 {
        self.occupancy(j) + 0.5 - self.anomalous(j).norm()
    }

    /// `|m_j|² ≤ n_j (n_j + 1)` on every channel.
    pub fn is_physical(&self) -> bool {
        (0..self.n_modes()).all(|j| {
            let n = self.occupancy(j);
            self.anomalous(j).norm_sqr() <= n * (n + 1.0) * (1.0 + 1e-12) + 1e-15
        })
    }

    pub fn to_file(&self) -> InputMomentsFile {
        let n = self.n_modes();
        let channels = (0..n)
            .map(|j| ChannelMoments {
                n: self.occupancy(j),
                m_re: self.anomalous(j).re,
                m_im: self.anomalous(j).im,
            })
            .collect();
        let mut cross = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (nn, mm) = (self.normal[(i, j)], self.anomalous[(i, j)]);
                if nn != ZERO || mm != ZERO {
                    cross.push(CrossMoments {
                        i,
                        j,
                        n_re: nn.re,
                        n_im: nn.im,
                        m_re: mm.re,
                        m_im: mm.im,
                    });
                }
            }
        }
        InputMomentsFile { channels, cross }
    }
}

/// JSON form: `{"channels": [{"n", "m_re", "m_im"}], "cross": [{"i", "j", ...}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputMomentsFile {
    pub channels: Vec<ChannelMoments>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross: Vec<CrossMoments>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMoments {
    #[serde(default)]
    pub n: f64,
    #[serde(default)]
    pub m_re: f64,
    #[serde(default)]
    pub m_im: f64,
}

/// `⟨a_i† a_j⟩ = n_re + i n_im`, `⟨a_i a_j⟩ = m_re + i m_im`, `i ≠ j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossMoments {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub n_re: f64,
    #[serde(default)]
    pub n_im: f64,
    #[serde(default)]
    pub m_re: f64,
    #[serde(default)]
    pub m_im: f64,
}

impl InputMomentsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn into_moments(self, n_modes: usize) -> Result<InputMoments> {
        if self.channels.len() != n_modes {
            return Err(Error::InvalidSpec(format!(
                "expected {n_modes} input channels, found {}",
                self.channels.len()
            )));
        }
        let mut normal = CMatrix::zeros(n_modes, n_modes);
        let mut anomalous = CMatrix::zeros(n_modes, n_modes);
        for (j, c) in self.channels.iter().enumerate() {
            if !(c.n >= 0.0 && c.n.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "channels[{j}].n must be non-negative, got {}",
                    c.n
                )));
            }
            normal[(j, j)] = C64::new(c.n, 0.0);
            anomalous[(j, j)] = C64::new(c.m_re, c.m_im);
        }
        for (t, c) in self.cross.iter().enumerate() {
            if c.i >= n_modes || c.j >= n_modes || c.i == c.j {
                return Err(Error::InvalidSpec(format!(
                    "cross[{t}] needs two distinct channels below {n_modes}"
                )));
            }
            let nn = C64::new(c.n_re, c.n_im);
            let mm = C64::new(c.m_re, c.m_im);
            normal[(c.i, c.j)] = nn;
            normal[(c.j, c.i)] = nn.conj();
            anomalous[(c.i, c.j)] = mm;
            anomalous[(c.j, c.i)] = mm;
        }
        InputMoments::from_matrices(normal, anomalous)
    }
}

/// Stationary symmetrized covariance in the doubled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    pub v: CMatrix,
}

impl CovarianceState {
    pub fn n_modes(&self) -> usize {
        self.v.rows() / 2
    }

    /// `[[V_XX, V_XP], [V_XP, V_PP]]` of one mode.
    pub fn quadrature_block(&self, mode: usize) -> [[f64; 2]; 2] {
        let q = self.quadrature_covariance();
        let (x, p) = (2 * mode, 2 * mode + 1);
        [[q[x][x], q[x][p]], [q[p][x], q[p][p]]]
    }

    /// Real covariance in the ordering `(x₁, p₁, x₂, p₂, …)`.
    pub fn quadrature_covariance(&self) -> Vec<Vec<f64>> {
        let n = self.n_modes();
        let t = CMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let mode = r / 2;
            if c != mode && c != n + mode {
                return ZERO;
            }
            let creation = c == n + mode;
            match (r % 2, creation) {
                (0, _) => C64::new(FRAC_1_SQRT_2, 0.0),
                (_, false) => -I * FRAC_1_SQRT_2,
                (_, true) => I * FRAC_1_SQRT_2,
            }
        });
        let q = &(&t * &self.v) * &t.adjoint();
        (0..2 * n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| 0.5 * (q[(i, j)].re + q[(j, i)].re))
                    .collect()
            })
            .collect()
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.v.hermitian_residual()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigenvalues(&self.v.hermitian_part())?
            .eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min))
    }

    /// `V_XX V_PP − V_XP²` for each mode; at least 1/4 for physical states.
    pub fn heisenberg_products(&self) -> Vec<f64> {
        (0..self.n_modes())
            .map(|m| {
                let b = self.quadrature_block(m);
                b[0][0] * b[1][1] - b[0][1] * b[1][0]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureVariance {
    pub mode: usize,
    /// Angle in `[0, π)`.
    pub theta: f64,
    pub value: f64,
}

pub fn steady_covariance(ss: &StateSpace, inputs: &InputMoments) -> Result<CovarianceState> {
    if inputs.n_modes() != ss.n_modes() {
        return Err(Error::dim(
            format!("{} input channels", ss.n_modes()),
            inputs.n_modes().to_string(),
        ));
    }
    ensure_stable(&ss.drift)?;
    let q = &(&ss.input * &inputs.noise_matrix()) * &ss.input.adjoint();
    let v = solve_lyapunov(&ss.drift, &q.hermitian_part())?;
    Ok(CovarianceState { v })
}

/// Variance of `X_mode(θ)`.
pub fn quadrature_variance(cs: &CovarianceState, mode: usize, theta: f64) -> f64 {
    block_variance(&cs.quadrature_block(mode), theta)
}

pub fn block_variance(b: &[[f64; 2]; 2], theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    c * c * b[0][0] + s * s * b[1][1] + 2.0 * s * c * b[0][1]
}

pub fn min_quadrature_variance(cs: &CovarianceState, mode: usize) -> QuadratureVariance {
    let (theta, value) = block_minimum(&cs.quadrature_block(mode));
    QuadratureVariance { mode, theta, value }
}

/// Smaller eigenvalue of a symmetric 2×2 block and the angle achieving it.
pub fn block_minimum(b: &[[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (b[0][0] + b[1][1]);
    let d = 0.5 * (b[0][0] - b[1][1]);
    let off = 0.5 * (b[0][1] + b[1][0]);
    let r = d.hypot(off);
    let theta = if r == 0.0 {
        0.0
    } else {
        reduce_angle(0.5 * (-off).atan2(-d))
    };
    (theta, mean - r)
}

fn reduce_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Phases `φ` with `e^{i(φ_i − φ_j)} A_ij` real for the annihilation block,
/// if they exist. Requires real diagonal entries.
pub fn real_gauge(ss: &StateSpace) -> Option<Vec<f64>> {
    let a = ss.annihilation_block();
    let n = a.rows();
    let tol = 1e-12 * a.max_abs().max(1.0);
    if (0..n).any(|i| a[(i, i)].im.abs() > tol) {
        return None;
    }
    let mut phase: Vec<Option<f64>> = vec![None; n];
    for root in 0..n {
        if phase[root].is_some() {
            continue;
        }
        phase[root] = Some(0.0);
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let pi = phase[i].unwrap();
            for j in 0..n {
                if phase[j].is_none() && a[(i, j)].norm() > tol {
                    phase[j] = Some(pi + a[(i, j)].arg());
                    stack.push(j);
                }
            }
        }
    }
    let phase: Vec<f64> = phase.into_iter().map(|p| p.unwrap()).collect();
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)] * C64::from_polar(1.0, phase[i] - phase[j]);
            if z.im.abs() > tol {
                return None;
            }
        }
    }
    Some(phase)
}

/// `ΔX_i²(θ) = Σ_j I_ij ΔX²_{j,in}(θ + φ_i − φ_j)` for passive networks with
/// uncorrelated inputs. The phases `φ` make the drift real; they vanish for
/// real drifts and only matter when inputs carry anomalous moments.
pub fn variance_decomposition(
    ss: &StateSpace,
    b: &CommutatorBudget,
    inputs: &InputMoments,
    theta: f64,
) -> Result<Vec<f64>> {
    if !ss.is_passive() {
        return Err(Error::NotApplicable(
            "variance decomposition needs a passive network".into(),
        ));
    }
    if !inputs.is_uncorrelated(0.0) {
        return Err(Error::NotApplicable(
            "variance decomposition needs uncorrelated inputs".into(),
        ));
    }
    let n = ss.n_modes();
    let phase = if inputs.has_anomalous() {
        real_gauge(ss).ok_or_else(|| {
            Error::NotApplicable(
                "anomalous inputs need a drift that is real up to mode phases".into(),
            )
        })?
    } else {
        vec![0.0; n]
    };
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| b.transfer[i][j] * inputs.input_variance(j, theta + phase[i] - phase[j]))
                .sum()
        })
        .collect())
}
