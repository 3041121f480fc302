use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use simon32_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format {
        path: PathBuf,
        #[source]
        source: CoreError,
    },
    #[error("empty result: {0}")]
    Empty(String),
    #[error(transparent)]
    Core(CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Classifies a core error raised while reading `path`.
    pub fn reading(path: impl Into<PathBuf>, err: CoreError) -> Self {
        match err {
            CoreError::Io(source) => CliError::io(path, source),
            source => CliError::Format {
                path: path.into(),
                source,
            },
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Format { .. } => 4,
            CliError::Empty(_) => 5,
            CliError::Core(CoreError::Io(_)) => 3,
            CliError::Core(CoreError::Format(_)) => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
