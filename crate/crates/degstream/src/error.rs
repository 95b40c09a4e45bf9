use std::io;
use std::path::{Path, PathBuf};

/// Unified error type for the library.
///
/// Variants split into two broad families: problems with the caller's
/// parameters or data shape (rejected up front), and problems reading or
/// decoding external files (surfaced with the offending path and line).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// An edge-list line that does not carry two vertex tokens.
    #[error("{path}:{line}: expected two vertex tokens, found {found}")]
    MalformedLine {
        path: PathBuf,
        line: u64,
        found: usize,
    },

    /// A histogram/profile table row that could not be decoded.
    #[error("{path}:{line}: {reason}")]
    MalformedTable {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    /// A parameter outside its documented domain (probabilities, grids,
    /// generator sizes, tolerances, ...).
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Empty vertex labels are not representable.
    #[error("vertex label must be non-empty")]
    EmptyLabel,

    /// Operation requires at least one recorded degree.
    #[error("trivial histogram: no degrees recorded")]
    TrivialHistogram,

    /// Operation requires a ccdh with at least one positive value.
    #[error("trivial ccdh: no positive values")]
    TrivialCcdh,

    /// A ccdh that was required to be monotone non-increasing is not.
    #[error("ccdh increases at degree {degree}; expected monotone non-increasing values")]
    NonMonotoneCcdh { degree: u64 },

    /// Evaluation point outside the support of a truncated distribution.
    #[error("count {k} outside support 0..={max}")]
    OutsideSupport { k: u64, max: u64 },

    /// Evaluation point left of the step-function transition start.
    #[error("x = {x} lies below the transition minimum {min}")]
    BelowTransition { x: f64, min: f64 },
}

impl Error {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code the CLI maps this error to: `2` for I/O and input
    /// decoding failures, `1` for everything the caller got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::MalformedLine { .. } | Error::MalformedTable { .. } => 2,
            _ => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
