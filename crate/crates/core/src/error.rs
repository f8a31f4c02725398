use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("singular linear system (pivot {pivot:e})")]
    Singular { pivot: f64 },

    #[error("drift matrix is not stable: eigenvalue {}{:+}i has non-negative real part", eigenvalue.re, eigenvalue.im)]
    Unstable { eigenvalue: Complex64 },

    #[error("quadrature block {block} is not stable: eigenvalue {}{:+}i has non-negative real part", eigenvalue.re, eigenvalue.im)]
    UnstableBlock { block: String, eigenvalue: Complex64 },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} after {subdivisions} subdivisions")]
    Quadrature { estimate: f64, subdivisions: usize },

    #[error("invalid network spec: {0}")]
    InvalidSpec(String),

    #[error("Bogoliubov frame error: {0}")]
    Frame(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("singular bound: {0}")]
    Singularity(String),
}

impl Error {
    /// Stability failures of the drift or of a quadrature block.
    pub fn is_instability(&self) -> bool {
        matches!(self, Error::Unstable { .. } | Error::UnstableBlock { .. })
    }

    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
