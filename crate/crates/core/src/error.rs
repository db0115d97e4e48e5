//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv parse failure: {0}")]
    Csv(#[from] csv::Error),

    #[error("column {column:?} in row {row} is not a finite number: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("label column {0:?} not found in header")]
    MissingLabelColumn(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset is degenerate: all attribute values equal {0}")]
    DegenerateRange(f64),

    #[error("instance has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: String,
    },

    #[error("exhaustive solve limited to {cap} variables, got {n}")]
    ProblemTooLarge { n: usize, cap: usize },

    #[error("bit vector has length {found}, expected {expected}")]
    BitLengthMismatch { expected: usize, found: usize },

    #[error("bit vector entry at {index} is {value}, expected 0 or 1")]
    NonBinaryBit { index: usize, value: u8 },

    #[error("labels are required for accuracy scoring but the dataset has none")]
    MissingLabels,

    #[error("cluster count {m} exceeds instance count {instances}")]
    TooManyClusters { m: usize, instances: usize },

    #[error("permutation search supports at most {cap} clusters, got {m}")]
    TooManyClassesForPermutation { m: usize, cap: usize },

    #[error("label sequences have lengths {left} and {right}")]
    LabelLengthMismatch { left: usize, right: usize },

    #[error("serialization failure: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(
        name: &'static str,
        requirement: &'static str,
        value: impl ToString,
    ) -> Self {
        Error::InvalidParameter {
            name,
            requirement,
            value: value.to_string(),
        }
    }
}
