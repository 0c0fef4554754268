use thiserror::Error;

use crate::depgraph::VertexSubset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no events")]
    NoEvents,
    #[error("unconstrained event {0}: empty variable set")]
    UnconstrainedEvent(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph too large for exact mode: {n} vertices (cap {cap})")]
    GraphTooLarge { n: usize, cap: usize },
    #[error("exact mode cap exceeded: {what} is {got}, cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("tree is not a subgraph of the tuple graph")]
    NotASubgraph,
    #[error("invalid activity at vertex {vertex}: {value}")]
    InvalidActivity { vertex: usize, value: f64 },
    #[error("outside zero-free region: partition function is {value}")]
    OutsideZeroFreeRegion { value: f64 },
    #[error("partition function vanishes")]
    VanishingPartitionFunction,
    #[error("outside the convergence region; witness subset {witness:?}")]
    OutsideRegion { witness: VertexSubset },
    #[error("invalid witness tree: {0}")]
    InvalidWitnessTree(String),
    #[error("step {step} out of range for log of length {len}")]
    StepOutOfRange { step: usize, len: usize },
    #[error("invalid variable model: {0}")]
    InvalidModel(String),
    #[error("model and dependency graph are inconsistent: {0}")]
    Inconsistent(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
