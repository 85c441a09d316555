use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: empty file")]
    EmptyFile { path: PathBuf },

    #[error("{path}: missing label column `{column}`")]
    MissingLabelColumn { path: PathBuf, column: String },

    #[error("{path}: row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: column `{column}`: non-binary label ({count} distinct values, first extra `{token}` at row {row})")]
    NonBinaryLabel {
        path: PathBuf,
        column: String,
        count: usize,
        token: String,
        row: usize,
    },

    #[error("{path}: row {row}: missing label in column `{column}`")]
    MissingLabel {
        path: PathBuf,
        column: String,
        row: usize,
    },

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("csv error: {0}")]
    Csv(String),

    #[error("binarization config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("column `{column}`: {message}")]
    Binarize { column: String, message: String },

    #[error("dataset has no features after binarization")]
    NoFeatures,

    #[error("invalid dataset cache: {0}")]
    Cache(String),

    #[error("feature vector has length {found}, model expects {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("invalid rational `{0}`")]
    Rational(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("json: {0}")]
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
