use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid raster: {0}")]
    InvalidRaster(String),

    #[error("empty crop: box does not intersect the image")]
    EmptyCrop,

    #[error("invalid cost at ({row}, {col})")]
    InvalidCost { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("embedding has zero or non-finite norm")]
    DegenerateEmbedding,

    #[error("invalid tracker parameters: {0}")]
    InvalidParams(String),

    #[error("frame {frame} is not after the last processed frame {last}")]
    FrameOrder { frame: u32, last: u32 },

    #[error("frame {frame}: {source}")]
    AtFrame {
        frame: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("unsatisfiable triplet: {0}")]
    UnsatisfiableTriplet(String),

    #[error("empty ground truth")]
    EmptyGroundTruth,

    #[error("duplicate id {id} in frame {frame}")]
    DuplicateId { frame: u32, id: u64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn config(key: &str, msg: impl Into<String>) -> Self {
        Error::Config { key: key.to_string(), msg: msg.into() }
    }
}
