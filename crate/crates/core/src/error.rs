use thiserror::Error;

/// Errors produced by the tensor, form, spectral and bound routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order must be at least 2, got {0}")]
    BadOrder(usize),
    #[error("duplicate index {0:?}")]
    DuplicateIndex(Vec<usize>),
    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },
    #[error("{0:?} is not a permutation")]
    BadPermutation(Vec<usize>),
    #[error("tensor is not cubical (dims {0:?})")]
    NotCubical(Vec<usize>),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("invalid exponent {0}")]
    BadExponent(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("tensor has negative entries")]
    NegativeEntries,
    #[error("vector must be entrywise positive")]
    NonPositiveVector,
    #[error("operation requires an order-2 tensor, got order {0}")]
    NotOrder2(usize),
    #[error("tensor is not regular")]
    NotRegular,
    #[error("graph is not r-partite with respect to the given partition")]
    NotPartite,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("entries must be finite")]
    NonFinite,
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
