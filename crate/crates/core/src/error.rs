use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid iterated function system: {0}")]
    InvalidSystem(String),

    #[error("budget exceeded: {requested} pieces requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rendering supports d ≤ 2 (got d = {0})")]
    UnsupportedDimension(usize),

    #[error("internal consistency violation: {0}")]
    ConsistencyViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
