use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("n = {n} exceeds the cap of {cap} for exhaustive enumeration")]
    CapExceeded { n: usize, cap: usize },

    #[error("estimated {terms} terms exceeds the budget of {budget}")]
    BudgetExceeded { terms: u64, budget: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("need at least {needed} sample rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("test family is empty")]
    EmptyFamily,

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
