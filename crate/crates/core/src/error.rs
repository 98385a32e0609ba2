use thiserror::Error;

/// Errors raised by the invariant library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("invalid state: {invariant} violated (residual {residual:.3e}, tolerance {tolerance:.1e})")]
    InvalidState {
        invariant: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not pure: Tr(rho^2) = {purity:.12}, need > 1 - {tolerance:.1e}")]
    NotPure { purity: f64, tolerance: f64 },

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("incomparable fingerprints: {0}")]
    IncomparableFingerprints(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
