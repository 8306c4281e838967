use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance too large: {0}")]
    InfeasibleSize(String),
    #[error("choice is not good: triple {0:?} carries I or I^c")]
    NotGoodChoice([usize; 3]),
    #[error("series diverges for alpha = {0} (need alpha > 1)")]
    DivergentParameter(f64),
    #[error("parameter outside supported range: {0}")]
    DomainError(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Whether a search finished or stopped early on its node budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Exact,
    /// The budget ran out; the reported value is only a lower bound.
    LowerBound,
}

impl SearchStatus {
    pub fn is_exact(self) -> bool {
        self == SearchStatus::Exact
    }
}
