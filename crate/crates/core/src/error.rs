use thiserror::Error;

use crate::fixedpoint::FxFormat;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fixed-point format: {0}")]
    InvalidFormat(String),

    #[error("raw value {raw} does not fit format {format}")]
    RawOutOfRange { raw: i64, format: FxFormat },

    #[error("{what} = {value} is outside the {region} convergence range [-{limit}, {limit}]")]
    Range {
        what: &'static str,
        value: f64,
        region: &'static str,
        limit: f64,
    },

    #[error("SoftMax input of length {len} exceeds FIFO capacity {capacity}")]
    Capacity { len: usize, capacity: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("empty input")]
    Empty,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("golden vector: {0}")]
    Golden(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
