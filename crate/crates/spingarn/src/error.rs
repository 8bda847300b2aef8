//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A vector or matrix had an unexpected dimension.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An input carried a NaN or infinity. These are rejected eagerly:
    /// silently propagating them hides divergence from the caller.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A condition that is impossible for valid inputs (e.g. a Gram matrix
    /// with eigenvalues >= 1 failing to factor). Indicates a bug.
    #[error("internal invariant violation: {0}")]
    Internal(String),

    /// A linear system that the caller's data made singular.
    #[error("singular system: {0}")]
    Singular(String),

    /// An affine constraint set `Ex = d` with `d` outside the range of `E`.
    #[error("inconsistent affine system: residual {residual:.3e} exceeds {tolerance:.3e}")]
    InconsistentAffineSet { residual: f64, tolerance: f64 },

    /// A problem-spec file failed validation; `field` names the offender.
    #[error("invalid problem spec at `{field}`: {message}")]
    Spec { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            field: field.into(),
            message: message.into(),
        }
    }
}
