use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid covariate set: {0}")]
    InvalidCovariates(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("phi must lie in [0, 1], got {0}")]
    InvalidPhi(f64),

    #[error("problem size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("equal split requires an even number of subjects, got {0}")]
    OddEqualSplit(usize),

    #[error("column {index} has norm {norm} > 1; the unit-ball bound does not apply")]
    HypothesisViolated { index: usize, norm: f64 },

    #[error("expected {expected} circuit parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("optimizer finished without evaluating the objective")]
    NoEvaluations,

    #[error("unsupported plot dimension {0}: only 2-D covariates can be plotted")]
    UnsupportedDimension(usize),

    #[error("unknown method `{0}` (expected random, gsw, vqe, qaoa or exhaustive)")]
    UnknownMethod(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
