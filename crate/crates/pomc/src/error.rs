use std::path::PathBuf;

use thiserror::Error;

/// Errors reported by constructors, file parsers, and the experiment
/// harness. Contract violations on hot paths (e.g. evaluating a solution
/// of the wrong length) panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("ground set too large for exhaustive search: n={n} exceeds guard {guard}")]
    GuardExceeded { n: usize, guard: usize },

    #[error("malformed graph file: {0}")]
    GraphFormat(String),

    #[error("malformed schedule file: {0}")]
    ScheduleFormat(String),

    #[error("malformed records file: {0}")]
    RecordsFormat(String),

    #[error("malformed metadata file: {0}")]
    MetadataFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
