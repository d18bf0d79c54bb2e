use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The computation needs a value outside the Gaussian rationals (retry in float mode).
    #[error("not solvable in exact arithmetic: {0}")]
    ExactUnsolvable(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
