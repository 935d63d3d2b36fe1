use thiserror::Error;

/// Errors raised by environments, algorithms and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("budget exhausted: {requested} pulls requested, {remaining} remaining")]
    BudgetExhausted { requested: u64, remaining: u64 },

    #[error("invalid arm index {index} (K = {k})")]
    InvalidArm { index: usize, k: usize },

    #[error("classification has length {got}, expected {expected}")]
    InvalidClassification { got: usize, expected: usize },

    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid range: l = {l} > r = {r}")]
    InvalidRange { l: usize, r: usize },

    #[error("stopped by signal after {pulls} pulls")]
    Stopped { pulls: u64 },

    #[error("means violate the {0} shape constraint")]
    ShapeViolation(crate::problem::Shape),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
