use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("{path}: expected {expected} records, found {found}")]
    LengthMismatch {
        path: PathBuf,
        expected: u64,
        found: u64,
    },

    #[error("{path}: cannot parse record {record} ({value:?}) as a number")]
    Parse {
        path: PathBuf,
        record: u64,
        value: String,
    },

    #[error("index {index} out of range for population of size {n}")]
    IndexOutOfRange { index: u64, n: u64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn construction(msg: impl Into<String>) -> Error {
    Error::Construction(msg.into())
}
