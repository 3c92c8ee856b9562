use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario value breaks one of the game's invariants.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    /// A call received arguments outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed configuration: scenario files, parameter paths, flags.
    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Configuration problems (bad input files or flags) as opposed to
    /// failures discovered while computing.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Invalid { .. } | Error::Config { .. } | Error::Io { .. }
        )
    }
}
