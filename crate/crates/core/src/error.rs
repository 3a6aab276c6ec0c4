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

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("no usable rows after filtering ({dropped} dropped)")]
    NoRows { dropped: usize },

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("treatment column `{column}` has value {value}; expected 0 or 1")]
    NonBinaryTreatment { column: String, value: f64 },

    #[error("design matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("need more observations than parameters (n = {n}, p = {p}, required n >= {required})")]
    TooFewObservations { n: usize, p: usize, required: usize },

    #[error("residuals have zero spread; kernel bandwidth would be zero")]
    ZeroVariance,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is numerically singular (rcond = {rcond:e})")]
    Singular { rcond: f64 },

    #[error("covariance has negative variance {value:e} at index {index}")]
    NegativeVariance { index: usize, value: f64 },

    #[error("semiparametric fit failed for the {model} model: {reasons:?}")]
    NumericalFailure { model: String, reasons: Vec<String> },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
