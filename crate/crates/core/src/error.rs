use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("missing column {0:?} in header")]
    MissingColumn(String),

    #[error("too few rows: {found} valid rows, need at least {required}")]
    TooFewRows { found: usize, required: usize },

    #[error("row {row}: {reason}")]
    BadRow { row: usize, reason: String },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite input value {0}")]
    NonFiniteInput(f64),

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("cannot compute MAPE: {0}")]
    Mape(&'static str),

    #[error("series exhausted: {0}")]
    SeriesExhausted(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("grid file line {line}: {reason}")]
    GridSyntax { line: usize, reason: String },

    #[error("methodology violated: {0}")]
    Methodology(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
