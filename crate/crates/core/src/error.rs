use std::path::PathBuf;

/// Errors raised by the samplers, models, and experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point lies outside the unit ball (norm {norm})")]
    OutsideBall { norm: f64 },

    #[error("point lies outside the constraint domain: {0}")]
    OutsideDomain(String),

    #[error("invalid constraint domain: {0}")]
    InvalidDomain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is not symmetric positive-definite")]
    NotPositiveDefinite,

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("sampler {sampler} does not support {domain}")]
    UnsupportedDomain {
        sampler: &'static str,
        domain: String,
    },

    #[error("model evaluation failed at iteration {iteration}: {reason}")]
    ModelEvaluation { iteration: usize, reason: String },

    #[error("all importance weights are zero")]
    ZeroWeights,

    #[error("series too short for ESS: {len} < {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("data file not found: {0}")]
    MissingFile(PathBuf),

    #[error("{path}: line {line}: {reason}")]
    MalformedRow {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: expected {expected} columns, found {found}")]
    ColumnCount {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("column `{column}` has zero variance and cannot be standardized")]
    ZeroVariance { column: String },

    #[error("invalid configuration: `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("configuration parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    TomlSerialize(#[from] toml::ser::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
