use std::fmt;

/// Failure classes, each mapped to a fixed process exit code.
#[derive(Debug)]
pub enum CliError {
    /// The input could not be read or parsed as JSON.
    Unreadable(String),
    /// A state or parameter failed validation.
    Invalid(String),
    /// Routes disagreed; the record was still written.
    RouteDisagreement(f64),
    /// One or more verification checks failed.
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Unreadable(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::RouteDisagreement(_) => 3,
            CliError::VerifyFailed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Unreadable(msg) => write!(f, "unreadable input: {msg}"),
            CliError::Invalid(msg) => write!(f, "invalid input: {msg}"),
            CliError::RouteDisagreement(dev) => {
                write!(f, "routes disagree: max entry deviation {dev:e}")
            }
            CliError::VerifyFailed(n) => write!(f, "verification failed for {n} sample(s)"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<spinchsh_core::Error> for CliError {
    fn from(e: spinchsh_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
