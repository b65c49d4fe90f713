use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        /// 1-based line number for text formats, byte offset for binary PLY.
        line: usize,
        message: String,
    },

    #[error("unsupported mesh format: {0}")]
    UnsupportedFormat(PathBuf),

    #[error("image error at {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mesh has no non-degenerate faces")]
    DegenerateMesh,

    #[error("mesh carries no texture or vertex colors")]
    NoAppearance,

    #[error("point cloud has no colors")]
    MissingColors,

    #[error("correspondence is empty")]
    EmptyCorrespondence,

    #[error("collapse history does not match mesh: {0}")]
    HistoryMismatch(String),

    #[error("{faces} charts do not fit in a {max}x{max} atlas")]
    AtlasCapacity { faces: usize, max: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, message: message.into() }
    }
}
