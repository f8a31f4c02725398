//! Small dense complex linear algebra: matrices, spectra, Lyapunov solves
//! and frequency-domain quadrature.

pub mod eigen;
pub mod lyapunov;
pub mod matrix;
pub mod quadrature;

pub use eigen::{eigenvalues, ensure_stable, is_stable, Spectrum};
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use matrix::{CMatrix, Lu, C64};
pub use quadrature::{integrate_spectrum, integrate_spectrum_on, SpectralGrid};

/// Default numerical tolerances used across the crate.
pub struct Tolerances;

impl Tolerances {
    /// Relative Lyapunov residual bound, scaled by max(1, ‖q‖_max).
    pub const LYAPUNOV: f64 = 1e-10;
    /// Default absolute tolerance of the frequency quadrature.
    pub const QUADRATURE: f64 = 1e-8;
    /// Hermiticity check on inputs.
    pub const HERMITIAN: f64 = 1e-12;
    /// Physical realizability residual.
    pub const PR: f64 = 1e-12;
    /// Commutator sum rules.
    pub const SUM_RULE: f64 = 1e-9;
    /// Lower eigenvalue bound accepted as positive semidefinite.
    pub const PSD: f64 = -1e-10;
    /// Imaginary residue tolerated on the transfer-integral matrix.
    pub const TRANSFER_IMAG: f64 = 1e-10;
}
