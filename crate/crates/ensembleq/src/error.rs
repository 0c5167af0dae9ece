//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes disagree (quarter lengths, plane lengths, digit counts).
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A parameter lies outside its admissible range.
    #[error("out of range: {0}")]
    Domain(String),

    /// A null symbol appeared where the operation is undefined on nulls.
    #[error("null symbol not supported: {0}")]
    NullSymbol(String),

    /// Correlation over two strings with no jointly non-null position.
    #[error("correlation undefined: no position where both bits are non-null")]
    UndefinedCorrelation,

    /// Statistics of an all-null string.
    #[error("statistics undefined: string has no non-null bit")]
    UndefinedStatistics,

    /// A sampler or census found no admissible candidate.
    #[error("no admissible candidate: {0}")]
    NoCandidate(String),

    /// The reconstruction oracle was handed fewer digits than it needs.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// An invalid harness or CLI configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
