use std::path::PathBuf;

use thiserror::Error;

use crate::ingest::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid name: {0:?} is empty after normalization")]
    InvalidName(String),

    #[error("input rejected:\n{0}")]
    Validation(ValidationReport),

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },

    #[error("undefined correlation: {0} has zero variance")]
    UndefinedCorrelation(&'static str),

    #[error("unknown factor {0:?}")]
    UnknownFactor(String),

    #[error("factor {factor:?} has only {rows} rows overlapping with prevalence (need 2)")]
    InsufficientOverlap { factor: String, rows: usize },

    #[error("alpha must lie in the open interval (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("correlation must lie in [-1, 1], got {0}")]
    InvalidCorrelation(f64),

    #[error("invalid allocation request: {0}")]
    InvalidAllocation(String),

    #[error("invalid alias table: {0}")]
    InvalidAliases(String),

    #[error("unknown city {0:?}")]
    UnknownCity(String),

    #[error("{0}")]
    Invariant(String),
}
