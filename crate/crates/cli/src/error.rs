use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("{0}: matrix has quaternion entries, this command needs complex entries")]
    NotComplex(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] qbild::Error),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use qbild::Error as E;
        match self {
            CliError::Validation(_) => 2,
            CliError::NoConvergence(_) => 4,
            CliError::Core(E::NoConvergence { .. } | E::Infeasible | E::RetriesExhausted(_)) => 4,
            _ => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn json(path: &str, e: serde_json::Error) -> CliError {
        CliError::Parse {
            path: path.to_owned(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
