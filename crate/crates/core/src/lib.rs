//! Spectral p-norms, p-spectral radii and their bounds for real r-matrices
//! and weighted r-graphs.

pub mod bounds;
pub mod error;
mod exec;
pub mod forms;
pub mod hypergraph;
pub mod io;
pub mod oracle;
pub mod random;
pub mod spectral;
pub mod structure;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{EigenKit, SolverOptions, SpectralResult, Witness};
pub use structure::{interval_partition, symmetrant, Partition};
pub use tensor::Tensor;
