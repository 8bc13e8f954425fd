use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CsaError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph is disconnected; A_G of a disconnected graph is the product of the connected subgraph arrangements of its components, analyse each component separately")]
    Disconnected,
    #[error("hyperplane not in arrangement")]
    NotInArrangement,
    #[error("not a flat of the arrangement")]
    NotAFlat,
    #[error("not a partition of the arrangement: {0}")]
    NotAPartition(String),
    #[error("ideal is not downward closed: {sub:?} is a connected subset of {member:?} but is missing")]
    NotAnIdeal { member: Vec<usize>, sub: Vec<usize> },
    #[error("{what} budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: u64 },
    #[error("too many hyperplanes: {0} (limit 128)")]
    TooManyHyperplanes(usize),
    #[error("integer overflow while normalizing a normal vector")]
    Overflow,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CsaError>;
