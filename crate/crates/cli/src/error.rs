use thiserror::Error;

/// Errors that decide the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or inputs that do not fit the command: exit 2.
    #[error("usage: {0}")]
    Usage(String),
    /// A checked property did not hold: exit 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

/// Exit code for any error bubbling out of a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<CliError>() {
        return e.exit_code();
    }
    match err.downcast_ref::<ssac_core::Error>() {
        Some(
            ssac_core::Error::InvalidParams(_)
            | ssac_core::Error::InvalidInput(_)
            | ssac_core::Error::Parse { .. }
            | ssac_core::Error::SizeMismatch { .. }
            | ssac_core::Error::Generation(_),
        ) => 2,
        _ => 1,
    }
}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}
