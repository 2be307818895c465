use alloc::string::String;

/// Errors raised by ring construction, structure analysis and linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("element index {index} out of range for a ring of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("element `{0}` is not invertible")]
    NotInvertible(String),
    #[error("ring is not local")]
    NotLocal,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("ring order {order} exceeds the order cap {cap}")]
    CapExceeded { order: u128, cap: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("ordering plan error: {0}")]
    Plan(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
