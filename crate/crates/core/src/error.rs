use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column '{column}': {message}")]
    MalformedRow {
        row: usize,
        column: String,
        message: String,
    },

    #[error("schema: {0}")]
    Schema(String),

    #[error("schema file line {line}: {message}")]
    SchemaFile { line: usize, message: String },

    #[error("labels: {0}")]
    Labels(String),

    #[error("attribute '{0}' has no non-missing values")]
    AllMissing(String),

    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),

    #[error("attribute '{attribute}' has no category '{category}'")]
    UnknownCategory { attribute: String, category: String },

    #[error("parse error at line {line}, token '{token}': {message}")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
