use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading inputs, building instances and solving them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid equipment `{equipment}` field `{field}`: {message}")]
    Validation {
        equipment: String,
        field: String,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown equipment `{0}`")]
    UnknownEquipment(String),

    #[error("profile `{name}`: series `{series}` has {found} entries, expected {expected}")]
    ProfileLengthMismatch {
        name: String,
        series: String,
        expected: usize,
        found: usize,
    },

    #[error("profile length error: {0}")]
    Length(String),

    #[error("design is missing a value for `{0}`")]
    MissingDesignValue(String),

    #[error("bound error on `{column}`: {message}")]
    Bound { column: String, message: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("solver executable not found: {0}")]
    SolverNotFound(String),

    #[error("solver exited with {code:?}: {stderr}")]
    SolverFailed { code: Option<i32>, stderr: String },

    #[error("instance exceeds exact-solver limits: {0}")]
    LimitExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn validation(
        equipment: impl Into<String>,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Validation {
            equipment: equipment.into(),
            field: field.into(),
            message: message.into(),
        }
    }
}
