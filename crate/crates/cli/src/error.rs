use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    /// A library error, with the file it concerns when there is one.
    #[error("{}{source}", context.as_ref().map(|c| format!("{c}: ")).unwrap_or_default())]
    Core {
        context: Option<String>,
        #[source]
        source: framecurve::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Config(_) => exit::PARSE,
            CliError::Core { source, .. } if source.is_precondition() => exit::PRECONDITION,
            CliError::Core { .. } => exit::NUMERICAL,
        }
    }
}

impl From<framecurve::Error> for CliError {
    fn from(source: framecurve::Error) -> Self {
        CliError::Core { context: None, source }
    }
}

/// Attaches a file name (or other context) to library errors.
pub trait Context<T> {
    fn context(self, what: impl std::fmt::Display) -> Result<T>;
}

impl<T> Context<T> for framecurve::Result<T> {
    fn context(self, what: impl std::fmt::Display) -> Result<T> {
        self.map_err(|source| CliError::Core {
            context: Some(what.to_string()),
            source,
        })
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
