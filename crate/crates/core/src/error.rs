use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("source too short: `{source_id}` has {len} bytes, packet length is {packet_len}")]
    SourceTooShort {
        source_id: String,
        len: usize,
        packet_len: usize,
    },

    #[error("insufficient samples in class `{class}`: need {needed}, have {available}")]
    InsufficientSamples {
        class: String,
        needed: usize,
        available: usize,
    },

    #[error("series too short: need at least {required} samples, have {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("degenerate trajectory: no neighbour pairs with nonzero separation")]
    DegenerateTrajectory,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("chunk count mismatch: packet has {packet} chunks, representative has {representative}")]
    ChunkCountMismatch { packet: usize, representative: usize },

    #[error("empty representative set for class `{0}`")]
    EmptyRepresentatives(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("malformed feature table at line {line}: {message}")]
    MalformedTable { line: u64, message: String },

    #[error("bad file format: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
