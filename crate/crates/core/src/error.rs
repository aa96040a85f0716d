use thiserror::Error;

/// Errors produced by the spectral and dynamical primitives.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input failed structural validation (non-finite entries, shape
    /// mismatch, inadmissible word, incompatible cocycles, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numeric argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numerical routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Two quantities that must agree by construction disagree; this
    /// signals a bug in the numerics, not a failure of the mathematics.
    #[error("internal consistency violation: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
