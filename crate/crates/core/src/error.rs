use thiserror::Error;

/// Errors raised by family, partition and interval operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("universe size {size} outside 1..={cap}")]
    UniverseSize { size: usize, cap: usize },

    #[error("element {element} outside universe 1..={universe}")]
    ElementOutOfRange { element: i64, universe: usize },

    #[error("empty family (a non-empty family is required)")]
    EmptyFamily,

    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },

    #[error("family is not an algebra")]
    NotAnAlgebra,

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("invalid interval: lower endpoint {lo} is not below upper endpoint {hi}")]
    InvalidInterval { lo: String, hi: String },

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SetError>;
