use thiserror::Error;

/// Errors produced by rating aggregation, probability and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("rule is not a strength-average rule (probe residual {residual:.3e})")]
    NotRepresentable { residual: f64 },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("invalid rule parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown role `{0}`")]
    UnknownRole(String),

    #[error("invalid game score {0}; expected 0, 0.5 or 1")]
    InvalidScore(f64),

    #[error("parse error on line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("duplicate player `{0}`")]
    Duplicate(String),

    #[error("format schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
