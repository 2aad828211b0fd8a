use thiserror::Error;

/// Errors raised by the verification engine.
///
/// Numeric failures (`IndeterminateSign`, `PrecisionInsufficient`) are
/// recoverable: callers own the escalate-and-retry loop.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("indeterminate sign: {0}")]
    IndeterminateSign(&'static str),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("matrix is not unimodular (det = {0})")]
    NonUnimodular(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("height bound violated: {0}")]
    HeightBoundViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures that more working precision may cure.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::IndeterminateSign(_) | Error::PrecisionInsufficient(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
