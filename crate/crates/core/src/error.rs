use thiserror::Error;

use crate::search::SearchReport;

#[derive(Debug, Error)]
pub enum ZsError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("group of order {order} exceeds the subgroup enumeration bound {limit}")]
    EnumerationBudgetExceeded { order: usize, limit: usize },

    #[error("no regular sequence of length {length} found after {restarts} restarts")]
    RetryBudgetExceeded { length: usize, restarts: u64 },

    #[error("search budget exhausted after {} nodes", .0.nodes_explored)]
    SearchBudgetExceeded(Box<SearchReport>),

    #[error("search reached the length cap {cap}; value unknown")]
    CapReached { cap: usize },

    #[error("no closed formula for groups of rank {rank}")]
    FormulaUnavailable { rank: usize },

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("group algebra element is zero")]
    ZeroElement,

    #[error("product of binomials vanishes for the supplied assignment")]
    VanishingProduct,

    #[error("no covered coset found: {0}")]
    CosetNotFound(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("no prime field found: {0}")]
    FieldSearch(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ZsError> = std::result::Result<T, E>;
