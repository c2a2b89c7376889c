//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: duplicate entry for '{key}'")]
    Duplicate {
        path: PathBuf,
        line: usize,
        key: String,
    },

    #[error("series for '{word}' has no mass to normalize")]
    DegenerateSeries { word: String },

    #[error("corpus has {distinct} distinct words, context vocabulary needs {needed}")]
    VocabTooSmall { distinct: usize, needed: usize },

    #[error("'{word}' has no in-vocabulary context occurrences")]
    NoContext { word: String },

    #[error("word '{word}' not present in {resource}")]
    MissingWord { word: String, resource: String },

    #[error("invalid vector for '{word}': {msg}")]
    InvalidVector { word: String, msg: String },

    #[error("no observed values to impute from")]
    NoData,

    #[error("unknown symbol '{symbol}' in transcription of '{word}'")]
    UnknownSymbol { word: String, symbol: String },

    #[error("insufficient data: {msg}")]
    InsufficientData { msg: String },

    #[error("feature '{name}' is constant and cannot be scaled")]
    ConstantFeature { name: String },

    #[error("singular design matrix; offending column {column} ('{name}')")]
    Collinear { column: usize, name: String },

    #[error("separation detected: |{name}| exceeded {limit} during iteration")]
    Separation { name: String, limit: f64 },

    #[error("optimizer failed to converge: {msg}")]
    NonConvergence { msg: String },

    #[error("length budget violated after repair; final deficit {deficit}")]
    BudgetViolation { deficit: i64 },

    #[error("invalid argument: {msg}")]
    InvalidArgument { msg: String },

    #[error("infeasible configuration: {msg}")]
    Config { msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
