//! Eigenvalues of small dense complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR sweeps (Wilkinson shift, Givens rotations) on the active
//! window. Only eigenvalues are produced; no vectors are accumulated.

use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub const MAX_EIG_DIM: usize = 64;
const ITERS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues sorted by real part, descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
}

impl Spectrum {
    pub fn max_real(&self) -> f64 {
        self.eigenvalues
            .first()
            .map_or(f64::NEG_INFINITY, |z| z.re)
    }

    /// Eigenvalue with the largest real part.
    pub fn leading(&self) -> Option<C64> {
        self.eigenvalues.first().copied()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

pub fn eigenvalues(m: &CMatrix) -> Result<Spectrum> {
    let n = m.ensure_square()?;
    if n > MAX_EIG_DIM {
        return Err(Error::dim(format!("dimension <= {MAX_EIG_DIM}"), n));
    }
    let mut h = hessenberg(m);
    let mut eig = Vec::with_capacity(n);
    let norm = m.max_abs().max(f64::MIN_POSITIVE);
    let mut total_iters = 0usize;
    let mut iters = 0usize;
    let mut hi = n;
    while hi > 0 {
        let top = hi - 1;
        if top == 0 {
            eig.push(h[(0, 0)]);
            break;
        }
        // Find the start of the unreduced trailing block.
        let mut lo = top;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == top {
            eig.push(h[(top, top)]);
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        total_iters += 1;
        if iters > ITERS_PER_EIGENVALUE {
            return Err(Error::NonConvergence {
                iterations: total_iters,
            });
        }
        let shift = if iters.is_multiple_of(11) {
            // exceptional shift
            h[(top, top)] + C64::new(0.75 * h[(top, top - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(top - 1, top - 1)],
                h[(top - 1, top)],
                h[(top, top - 1)],
                h[(top, top)],
            )
        };
        qr_sweep(&mut h, lo, top, shift);
    }
    eig.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(Spectrum { eigenvalues: eig })
}

pub fn is_stable(m: &CMatrix, margin: f64) -> Result<bool> {
    Ok(eigenvalues(m)?.max_real() < -margin)
}

/// Returns `Err(Unstable)` naming the leading eigenvalue if `m` is not
/// strictly stable.
pub fn ensure_stable(m: &CMatrix) -> Result<Spectrum> {
    let spec = eigenvalues(m)?;
    match spec.leading() {
        Some(z) if z.re >= 0.0 => Err(Error::Unstable { eigenvalue: z }),
        _ => Ok(spec),
    }
}

fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- (I - 2vv†) h
        for j in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= *vr * dot * 2.0;
            }
        }
        // h <- h (I - 2vv†)
        for i in 0..n {
            let dot: C64 = v
                .iter()
                .enumerate()
                .map(|(c, vc)| h[(i, k + 1 + c)] * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                h[(i, k + 1 + c)] -= dot * vc.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let mu1 = mid + disc;
    let mu2 = mid - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 { (ONE, ZERO) } else { (a / r, b / r) };
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        rots.push((c, s));
    }
    for (idx, (c, s)) in rots.into_iter().enumerate() {
        let k = lo + idx;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -(x * s.conj()) + y * c.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::I;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn scaled_identity() {
        let m = CMatrix::identity(2).scale_real(-0.5);
        let s = eigenvalues(&m).unwrap();
        assert_eq!(s.len(), 2);
        for z in &s.eigenvalues {
            assert!(close(*z, C64::new(-0.5, 0.0), 1e-15));
        }
    }

    #[test]
    fn non_square_is_dimension_error() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(eigenvalues(&m), Err(Error::Dimension { .. })));
    }

    #[test]
    fn companion_matrix_roots() {
        // roots 1, 2, 3, 4: x⁴ − 10x³ + 35x² − 50x + 24
        let m = CMatrix::from_real_rows(&[
            [10.0, -35.0, 50.0, -24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        let s = eigenvalues(&m).unwrap();
        let want = [4.0, 3.0, 2.0, 1.0];
        for (z, w) in s.eigenvalues.iter().zip(want) {
            assert!(close(*z, C64::new(w, 0.0), 1e-10), "{z} vs {w}");
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = CMatrix::from_real_rows(&[[-0.1, 1.0], [-1.0, -0.1]]);
        let s = eigenvalues(&m).unwrap();
        let mut ims: Vec<f64> = s.eigenvalues.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues.iter().all(|z| (z.re + 0.1).abs() < 1e-12));
    }

    #[test]
    fn complex_triangular_diagonal_is_spectrum() {
        let m = CMatrix::from_rows(&[
            [C64::new(1.0, 2.0), ONE, I],
            [ZERO, C64::new(-3.0, 0.5), ONE],
            [ZERO, ZERO, C64::new(0.0, -1.0)],
        ]);
        let s = eigenvalues(&m).unwrap();
        assert!(close(s.eigenvalues[0], C64::new(1.0, 2.0), 1e-12));
        assert!(close(s.eigenvalues[1], C64::new(0.0, -1.0), 1e-12));
        assert!(close(s.eigenvalues[2], C64::new(-3.0, 0.5), 1e-12));
    }

    #[test]
    fn stability_margins() {
        let m = CMatrix::identity(2).scale_real(-0.5);
        assert!(is_stable(&m, 0.0).unwrap());
        assert!(!is_stable(&m, 0.5).unwrap());
        assert!(!is_stable(&CMatrix::zeros(2, 2), 0.0).unwrap());
    }
}
