use gal_core::GalError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] GalError),

    #[error("result not certified: {0}")]
    Uncertified(String),
}

impl CliError {
    /// Process exit code: 2 parse/usage, 3 rejected model or chart, 4 uncertified, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_precondition() => 3,
            CliError::Uncertified(_) => 4,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }
}
