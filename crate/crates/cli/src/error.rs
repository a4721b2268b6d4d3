use thiserror::Error;

/// Errors surfaced by the command-line front end, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("numerical failure: {0}")]
    Numerical(twrn_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl From<twrn_core::Error> for CliError {
    fn from(e: twrn_core::Error) -> Self {
        match e {
            twrn_core::Error::InvalidArgument(_) | twrn_core::Error::Domain { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
