use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} exceeds cap: {requested} > {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("range up to {requested} exceeds sieve limit {limit}")]
    OutOfTable { requested: u64, limit: u64 },

    /// The bisection bracket does not enclose a sign change.
    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("non-finite result: {0}")]
    NonFinite(String),

    /// A Cantor construction parameter set was rejected.
    #[error("parameter validation failed: {0}")]
    Params(String),

    #[error("sieve cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse failure classes, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Validation,
    Budget,
    Numerical,
    Io,
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Domain(_) | Error::Params(_) => Category::Validation,
            Error::CapExceeded { .. } | Error::OutOfTable { .. } => Category::Budget,
            Error::Bracket(_) | Error::NonFinite(_) => Category::Numerical,
            Error::Cache(_) | Error::Io(_) => Category::Io,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
