use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("antipode recursion needs a graded connected instance ({0})")]
    NotConnected(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("computation failed: {0}")]
    Computation(String),
}

impl Error {
    /// Errors caused by the caller's input rather than by a failing computation.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Computation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
