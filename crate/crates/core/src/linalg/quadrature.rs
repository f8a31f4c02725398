//! Adaptive Gauss-Kronrod integration of matrix-valued spectra over ℝ.
//!
//! The real line is mapped onto (−1, 1) with ω = s·t/(1 − t²). A
//! Lorentzian tail C/ω² becomes a bounded integrand near t = ±1, so no
//! cutoff is needed. Intervals are bisected greedily by largest error.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

pub const MAX_SUBDIVISIONS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration plan: frequency scale of the map and known resonance
/// frequencies used as initial breakpoints.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub scale: f64,
    pub breakpoints: Vec<f64>,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        SpectralGrid {
            scale: 1.0,
            breakpoints: Vec::new(),
        }
    }
}

/// (1/2π)∫_ℝ f(ω) dω with default mapping scale 1 and no breakpoints.
pub fn integrate_spectrum<F>(f: F, abs_tol: f64) -> Result<CMatrix>
where
    F: Fn(f64) -> CMatrix,
{
    integrate_spectrum_on(f, &SpectralGrid::default(), abs_tol)
}

pub fn integrate_spectrum_on<F>(f: F, grid: &SpectralGrid, abs_tol: f64) -> Result<CMatrix>
where
    F: Fn(f64) -> CMatrix,
{
    let s = if grid.scale > 0.0 && grid.scale.is_finite() {
        grid.scale
    } else {
        1.0
    };
    let g = |t: f64| -> CMatrix {
        let d = 1.0 - t * t;
        let omega = s * t / d;
        let jac = s * (1.0 + t * t) / (d * d) / (2.0 * PI);
        f(omega).scale_real(jac)
    };

    let mut cuts: Vec<f64> = (0..=16).map(|k| -1.0 + k as f64 / 8.0).collect();
    cuts.extend(
        grid.breakpoints
            .iter()
            .filter(|w| w.is_finite())
            .map(|&w| omega_to_t(w, s))
            .filter(|t| t.abs() < 1.0 - 1e-12),
    );
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut heap = BinaryHeap::new();
    let mut total: Option<CMatrix> = None;
    let mut err_sum = 0.0;
    for w in cuts.windows(2) {
        let piece = kronrod(&g, w[0], w[1]);
        err_sum += piece.err;
        total = Some(match total {
            None => piece.value.clone(),
            Some(t) => &t + &piece.value,
        });
        heap.push(piece);
    }
    let mut total = total.expect("at least one interval");
    let mut subdivisions = heap.len();

    while err_sum > abs_tol {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Quadrature {
                estimate: err_sum,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&g, worst.a, mid);
        let right = kronrod(&g, mid, worst.b);
        total = &(&total - &worst.value) + &(&left.value + &right.value);
        err_sum += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // re-sum to shed accumulated cancellation from the running update
    let mut exact: Option<CMatrix> = None;
    for p in heap.into_iter() {
        exact = Some(match exact {
            None => p.value,
            Some(t) => &t + &p.value,
        });
    }
    Ok(exact.unwrap_or(total))
}

fn omega_to_t(omega: f64, s: f64) -> f64 {
    if omega == 0.0 {
        0.0
    } else {
        (-s + (s * s + 4.0 * omega * omega).sqrt()) / (2.0 * omega)
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: CMatrix,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod<G>(g: &G, a: f64, b: f64) -> Piece
where
    G: Fn(f64) -> CMatrix,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c);
    let mut k = fc.scale_real(WGK[7]);
    let mut gauss = fc.scale_real(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = g(c - h * x);
        let f2 = g(c + h * x);
        let pair = &f1 + &f2;
        k = &k + &pair.scale_real(w);
        if j % 2 == 1 {
            gauss = &gauss + &pair.scale_real(WG[j / 2]);
        }
    }
    let value = k.scale_real(h);
    let err = value.max_abs_diff(&gauss.scale_real(h));
    Piece { a, b, value, err }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::C64;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_real_rows(&[[x]])
    }

    #[test]
    fn unit_lorentzian() {
        let r = integrate_spectrum(|w| scalar(1.0 / (0.25 + w * w)), 1e-10).unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_spectrum(|_| CMatrix::zeros(2, 2), 1e-10).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn narrow_off_center_peak_with_breakpoint() {
        // (1/2π)∫ γ/((ω−ν)² + γ²/4) dω = 1
        let (gamma, nu) = (1e-3, 7.0);
        let grid = SpectralGrid {
            scale: 1.0,
            breakpoints: vec![nu],
        };
        let r = integrate_spectrum_on(
            |w| scalar(gamma / ((w - nu).powi(2) + gamma * gamma / 4.0)),
            &grid,
            1e-9,
        )
        .unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-8, "{:?}", r[(0, 0)]);
    }

    #[test]
    fn complex_entries() {
        // odd imaginary part integrates to zero, even real part to 1
        let r = integrate_spectrum(
            |w| {
                let d = 0.25 + w * w;
                CMatrix::from_rows(&[[C64::new(1.0 / d, w / (d * d))]])
            },
            1e-10,
        )
        .unwrap();
        assert!((r[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9);
    }
}
