use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid deletion set: {0}")]
    InvalidDeletionSet(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("stale rule application: {0}")]
    StaleApplication(String),

    /// A state the reduction theory rules out. Always a bug in the engine.
    #[error("internal consistency error: {0}")]
    Internal(String),
}
