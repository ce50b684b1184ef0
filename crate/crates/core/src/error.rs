use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A scalar or structural parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// A matrix that must be Hermitian is not; the entry with the largest
    /// defect is reported.
    #[error("matrix `{matrix}` is not Hermitian: |A[{row}][{col}] - conj(A[{col}][{row}])| = {defect:e}")]
    NonHermitian {
        matrix: String,
        row: usize,
        col: usize,
        defect: f64,
    },

    /// A conserved or bounded quantity drifted out of tolerance during
    /// propagation.
    #[error("invariant `{what}` violated at t = {time}: value {value:e} exceeds tolerance {tolerance:e}")]
    InvariantViolation {
        what: &'static str,
        time: f64,
        value: f64,
        tolerance: f64,
    },

    #[error("polarization history has {available} samples, {needed} required to reach t = {time}")]
    IncompleteHistory {
        needed: usize,
        available: usize,
        time: f64,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
