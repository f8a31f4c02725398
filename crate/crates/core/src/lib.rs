//! Commutator budgets, steady states and squeezing bounds for stable,
//! physically realizable linear networks of bosonic modes.
//!
//! Conventions used throughout:
//! - doubled-space ordering `[a₁..a_N; a₁†..a_N†]`;
//! - Hamiltonian terms enter the drift as `−i ∂H`;
//! - symmetrized second moments, vacuum quadrature variance 1/2;
//! - quadrature `X(θ) = (a e^{−iθ} + a† e^{iθ})/√2`, `P = X(π/2)`.

pub mod budget;
pub mod error;
pub mod linalg;
pub mod network;
pub mod random;
pub mod scenarios;
pub mod steady;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Spectrum, Tolerances, C64};
