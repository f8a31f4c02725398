use super::eigen::ensure_stable;
use super::matrix::{CMatrix, Lu};
use super::Tolerances;
use crate::error::{Error, Result};

/// Solves `a W + W a† + q = 0` for Hermitian `q` and stable `a`.
///
/// The equation is vectorized as `(I ⊗ a + conj(a) ⊗ I) vec(W) = −vec(q)`
/// and solved directly; fine for the dimensions met here (2N ≤ 16).
pub fn solve_lyapunov(a: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    let n = a.ensure_square()?;
    if q.rows() != n || q.cols() != n {
        return Err(Error::dim(
            format!("{n}x{n}"),
            format!("{}x{}", q.rows(), q.cols()),
        ));
    }
    let herm = q.hermitian_residual();
    if herm > Tolerances::HERMITIAN * q.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual: herm });
    }
    ensure_stable(a)?;
    solve_lyapunov_unchecked(a, q)
}

/// Same as [`solve_lyapunov`] without the stability and Hermiticity
/// checks; callers that solve many right-hand sides for one drift use this
/// after checking once.
pub fn solve_lyapunov_unchecked(a: &CMatrix, q: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    let lu = lyapunov_operator(a)?;
    Ok(solve_with(&lu, n, q))
}

/// Factorized Kronecker operator `I ⊗ a + conj(a) ⊗ I`.
pub fn lyapunov_operator(a: &CMatrix) -> Result<Lu> {
    let n = a.ensure_square()?;
    let id = CMatrix::identity(n);
    let op = &id.kron(a) + &a.conj().kron(&id);
    Lu::factor(&op)
}

pub fn solve_with(lu: &Lu, n: usize, q: &CMatrix) -> CMatrix {
    let rhs: Vec<_> = q.vec().into_iter().map(|z| -z).collect();
    let w = CMatrix::from_vec_col_major(n, n, &lu.solve_vec(&rhs));
    w.hermitian_part()
}

/// ‖a W + W a† + q‖_max.
pub fn lyapunov_residual(a: &CMatrix, w: &CMatrix, q: &CMatrix) -> f64 {
    let aw = a * w;
    let r = &(&aw + &(w * &a.adjoint())) + q;
    r.max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{C64, I, ONE};

    #[test]
    fn decoupled_scalar_case() {
        let a = CMatrix::identity(2).scale_real(-0.5);
        let q = CMatrix::identity(2);
        let w = solve_lyapunov(&a, &q).unwrap();
        assert!(w.approx_eq(&CMatrix::identity(2), 1e-14));
    }

    #[test]
    fn beam_splitter_block() {
        let h = C64::new(-0.5, 0.0);
        let g = I * -0.5;
        let a = CMatrix::from_rows(&[[h, g], [g, h]]);
        let q = CMatrix::from_real_diagonal(&[0.0, 1.0]);
        let w = solve_lyapunov(&a, &q).unwrap();
        let want = CMatrix::from_rows(&[
            [C64::new(0.25, 0.0), C64::new(0.0, -0.25)],
            [C64::new(0.0, 0.25), C64::new(0.75, 0.0)],
        ]);
        assert!(w.approx_eq(&want, 1e-14), "{w:?}");
    }

    #[test]
    fn diagonal_case() {
        let a = CMatrix::from_real_diagonal(&[-1.0, -2.0]);
        let q = CMatrix::from_real_diagonal(&[2.0, 4.0]);
        let w = solve_lyapunov(&a, &q).unwrap();
        assert!(w.approx_eq(&CMatrix::identity(2), 1e-14));
    }

    #[test]
    fn rejects_unstable_and_non_hermitian() {
        let a = CMatrix::from_real_diagonal(&[-1.0, 0.5]);
        let q = CMatrix::identity(2);
        match solve_lyapunov(&a, &q) {
            Err(Error::Unstable { eigenvalue }) => assert!((eigenvalue.re - 0.5).abs() < 1e-14),
            other => panic!("expected stability error, got {other:?}"),
        }
        let a = CMatrix::identity(2).scale_real(-1.0);
        let q = CMatrix::from_rows(&[[ONE, I], [I, ONE]]);
        assert!(matches!(
            solve_lyapunov(&a, &q),
            Err(Error::NotHermitian { .. })
        ));
    }
}
