use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid probabilities: {0}")]
    Probability(String),

    #[error("line {line}{}: {message}", doc_id.as_ref().map(|d| format!(" (doc `{d}`)")).unwrap_or_default())]
    Record {
        line: usize,
        doc_id: Option<String>,
        message: String,
    },

    #[error("predictor error{}: {message}", id.map(|i| format!(" (request {i})")).unwrap_or_default())]
    Predictor { id: Option<u64>, message: String },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
