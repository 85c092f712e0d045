use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {n} nodes")]
    InvalidNode { node: usize, n: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("duplicate edge between nodes {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge ({i}, {j}): {reason}")]
    InvalidWeight { i: usize, j: usize, reason: String },
    #[error("invalid leader set: {0}")]
    InvalidLeaders(String),
    #[error("incompatible graphs: {0}")]
    Incompatible(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not equitable: {0}")]
    NotEquitable(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
