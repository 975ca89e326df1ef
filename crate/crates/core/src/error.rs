use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("generator window exceeded: {0}")]
    WindowOverflow(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("precision exhausted: requested 2^{requested}, available 2^{available}")]
    PrecisionExhausted { requested: u32, available: u32 },
    #[error("division by a non-unit: {0}")]
    DivisionByNonUnit(String),
    #[error("ill-defined module: {0}")]
    IllDefinedModule(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
