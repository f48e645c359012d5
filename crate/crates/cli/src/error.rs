use twirlkit_core::Error as CoreError;

/// CLI failure carrying the stable exit-code contract: 2 for config and
/// input problems, 3 for physical-validation failures. A broken output
/// pipe ends the run quietly.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Validation(String),
    BrokenPipe,
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Input(msg) | CliError::Validation(msg) => msg,
            CliError::BrokenPipe => "",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
            CliError::BrokenPipe => 0,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Validation(_) => CliError::Validation(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Input(err.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
