use thiserror::Error;

/// Top-level CLI failure classes, each with a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verify(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub const EXIT_VERIFY: i32 = 1;
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_IO: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => Self::EXIT_VERIFY,
            CliError::Config(_) => Self::EXIT_CONFIG,
            CliError::Io(_) => Self::EXIT_IO,
        }
    }
}

impl From<hypersparse::Error> for CliError {
    fn from(e: hypersparse::Error) -> Self {
        // Library errors reaching the CLI mean the run was misconfigured
        // (bad dims, cuts, stream parameters, or a value range the checked
        // monoid cannot hold).
        CliError::Config(e.to_string())
    }
}
