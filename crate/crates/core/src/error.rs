//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("state is not normalized (|norm - 1| = {defect:.3e})")]
    NotNormalized { defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation `{context}` does not support representation {label}")]
    UnsupportedRep { context: &'static str, label: String },

    #[error("unknown chain `{0}`")]
    UnknownChain(String),

    #[error("chain operators do not commute (residual {residual:.3e})")]
    ChainNotCommuting { residual: f64 },

    #[error("linear algebra backend failure: {0}")]
    Linalg(String),

    #[error("numerical invariant violated: {0}")]
    NumericalDrift(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to. Config, validation and
    /// i/o problems are usage errors (2); violated numerical invariants
    /// (norm or energy drift past tolerance) get their own code (3).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::NumericalDrift(_) => 3,
            _ => 2,
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
