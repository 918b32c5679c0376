use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid length: expected {expected}, got {actual} ({what})")]
    Length {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of bounds for block of {len} samples")]
    OutOfBounds { index: f64, len: usize },

    #[error("input block has zero power")]
    ZeroPower,

    #[error("not enough reference symbols: need {needed}, got {got}")]
    InsufficientReference { needed: usize, got: usize },

    #[error("layout mismatch: {0}")]
    Layout(String),

    #[error("malformed data table at line {line}: {reason}")]
    Table { line: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
