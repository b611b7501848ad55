use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: a qudit needs d >= 2")]
    InvalidDimension(usize),
    #[error("invalid direction: norm {norm} is not 1")]
    InvalidDirection { norm: f64 },
    #[error("degenerate state: coefficient vector has zero norm")]
    DegenerateState,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("state is not pure (purity {0})")]
    NotPure(f64),
    #[error("numerical inconsistency: {what} has imaginary residue {residue:e}")]
    NumericalInconsistency { what: &'static str, residue: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
