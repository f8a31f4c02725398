//! Parameterized squeezing and entanglement scenarios built on the budget
//! and steady-state machinery.

mod parametric;
mod three_mode;
mod two_mode;

pub use parametric::{
    parametric_bound, parametric_optimum, parametric_variance_check, BlockRatios,
    ParametricCheck, ParametricOptimum, ParametricParams,
};
pub use three_mode::{
    boundary_flip, duan_quantity, eta_e, optimal_coupling, separability_boundary,
    three_mode_budget, BoundaryFlip, BoundaryLine, DuanResult, OptimalCoupling, ThreeModeBudget,
    ThreeModeParams,
};
pub use two_mode::{
    two_mode_squeezing_power, two_mode_squeezing_power_via_budget, SqueezingPowerResult,
    TwoModeParams,
};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is below `rel_tol` relative to its midpoint.
pub fn golden_section_max<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if (hi - lo) <= rel_tol * (0.5 * (hi + lo)).abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Evaluates `f` on a grid and returns the bracket around the best sample,
/// clamped to the grid ends.
pub(crate) fn bracket_max<F>(f: &mut F, grid: &[f64]) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (k, &x) in grid.iter().enumerate() {
        let v = f(x);
        if v > best_val {
            best_val = v;
            best = k;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    (lo, hi)
}

pub fn logspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, v) = golden_section_max(|x| -(x - 1.3).powi(2) + 2.0, 0.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bracket_contains_peak() {
        let grid = logspace(1e-3, 1e3, 61);
        let mut f = |x: f64| -(x.ln() - 2.0f64.ln()).powi(2);
        let (lo, hi) = bracket_max(&mut f, &grid);
        assert!(lo < 2.0 && 2.0 < hi);
        let (x, _) = golden_section_max(f, lo, hi, 1e-9);
        assert!((x - 2.0).abs() < 1e-7);
    }
}
