use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid generator J_{{{i},{j}}} for dimension {n}")]
    InvalidGenerator { i: usize, j: usize, n: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An intermediate exponential left the finite range of `f64`.
    #[error("numeric overflow while evaluating {0}")]
    Overflow(&'static str),

    /// The local flow left its domain; `value` is the offending
    /// logarithm argument or denominator.
    #[error("flow undefined: domain quantity {value} is not positive")]
    FlowUndefined { value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `value` if it is finite, otherwise an overflow error tagged with `what`.
pub(crate) fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(what))
    }
}
