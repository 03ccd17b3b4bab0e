use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library.
///
/// `Domain` covers arguments outside a function's stated domain, `Contract`
/// covers inconsistencies between objects that were supposed to describe the
/// same data (a plan sized for a different sample, a kept-set that does not
/// match the thinner's counters). File problems keep the offending path; a
/// malformed point file also keeps the 1-based line number.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Domain(String),

    #[error("{0}")]
    Contract(String),

    #[error("{path}: line {line}: {message}")]
    PointFile {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("cannot {action} {path}: {source}")]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
