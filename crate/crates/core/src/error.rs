use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into two families: input problems (bad files, schema
/// violations, invalid arguments) and numerical failures (degenerate fits,
/// collapsing economies). [`Error::is_numerical`] tells them apart, which the
/// command-line driver maps onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Schema { line: u64, message: String },

    #[error("catalogue is empty{}", context.as_ref().map(|c| format!(" ({c})")).unwrap_or_default())]
    EmptyCatalogue { context: Option<String> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("expected {expected} growth coefficients, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn schema(line: u64, message: impl Into<String>) -> Self {
        Error::Schema {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::Numerical(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
