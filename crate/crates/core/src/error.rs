use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has eigenvalue {min:e} below the PSD tolerance")]
    NotPositive { min: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid subsystem selection: {0}")]
    BadSubsystem(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("point ({0}, {1}, {2}) lies outside the Bell-diagonal tetrahedron")]
    OutsideTetrahedron(f64, f64, f64),

    #[error("encoder circuit rejected: {0}")]
    BadEncoder(String),

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("missing tomography setting {0}")]
    MissingSetting(String),

    #[error("measurement basis is not orthonormal (deviation {0:e})")]
    BadBasis(f64),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Config errors map to exit code 2, everything else to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            _ => 3,
        }
    }
}
