use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("invalid network: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state {0:?} is outside the species bounds")]
    OutOfBounds(Vec<i64>),
    #[error("propensity of reaction {reaction} is not finite at state {state:?}")]
    NonFinite { reaction: usize, state: Vec<i64> },
    #[error("DA vector {z:?} maps to out-of-bounds population {x:?}")]
    ImpossibleDa { z: Vec<u64>, x: Vec<i64> },
    #[error("model schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
