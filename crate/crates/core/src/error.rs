use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every engine module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A structurally valid input violates a documented invariant.
    #[error("{0}")]
    Validation(String),

    /// Malformed tabular input; `row` and `column` are 1-based file positions.
    #[error("row {row}, column {column}: {detail}")]
    Parse {
        row: u64,
        column: usize,
        detail: String,
    },

    /// A row or column of a contingency table sums to zero.
    #[error("{0}")]
    DegenerateMargin(String),

    /// A linear-scale result does not fit in an `f64`.
    #[error("{0}")]
    Overflow(String),

    /// The Bayes factor never reaches the requested threshold.
    #[error("{0}")]
    NoRoot(String),

    /// A search could not enclose its target (minimum or root).
    #[error("{0}")]
    Bracketing(String),

    /// An iteration cap was hit; results would otherwise be silently truncated.
    #[error("{0}")]
    Internal(String),

    /// Failure while generating one point of the threshold curve.
    #[error("df={df}, alpha={alpha}: {source}")]
    Curve {
        df: u32,
        alpha: f64,
        source: Box<Error>,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Short category label used in diagnostics (`error: <category>: <detail>`).
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
            Error::Parse { .. } => "parse",
            Error::DegenerateMargin(_) => "degenerate-margin",
            Error::Overflow(_) => "overflow",
            Error::NoRoot(_) => "no-root",
            Error::Bracketing(_) => "bracketing",
            Error::Internal(_) => "internal",
            Error::Curve { source, .. } => source.category(),
            Error::Io(_) => "io",
        }
    }

    /// True for numerical-solver failures, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            Error::NoRoot(_) | Error::Bracketing(_) | Error::Internal(_) => true,
            Error::Curve { source, .. } => source.is_solver_failure(),
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
