use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid size {n} too small for finest scale {j}: need at least {min}")]
    GridTooSmall { n: usize, j: u32, min: usize },

    #[error("filter bank is degenerate: coverage {value:e} at frequency ({n1}, {n2})")]
    DegenerateFilterBank { value: f64, n1: i64, n2: i64 },

    #[error("frequency ({0}, {1}) lies outside the sampling domain")]
    OutsideDomain(i64, i64),

    #[error("requested {requested} points but the domain holds only {available}")]
    TooManyPoints { requested: usize, available: usize },

    #[error("problem too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
