use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ude_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("matrix file line {line}: {message}")]
    MatrixFormat { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("non-finite value {value} in column {column}")]
    NonFinite { column: String, value: f64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}
