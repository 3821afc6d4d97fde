use std::fmt;

/// CLI error carrying its exit code: 2 for invalid input, 3 for internal
/// failures. Check failures (exit 1) are signaled by the command's return
/// value, not through this type.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn internal(err: impl fmt::Display) -> Self {
        CliError::Internal(err.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Internal(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}
