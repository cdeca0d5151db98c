use thiserror::Error;

/// Errors raised by the math core. Every variant is a domain error: the
/// inputs were well-formed but fall outside the range an operation accepts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-standard graph: {0}")]
    NonStandardGraph(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// An internal cross-check between two independent routes failed.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
