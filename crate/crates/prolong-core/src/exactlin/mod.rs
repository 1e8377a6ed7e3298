//! Exact linear algebra over the Gaussian rationals `Q(i)`.
//!
//! The base field is fixed to `Q(i)`: the gamma-matrix construction needs at
//! most a square root of -1 beyond `Q`, and `Q(i)` is closed under everything
//! the pipeline does. Storage is dense for small matrices
//! ([`ExactMatrix`]) and sparse for the large structured systems
//! ([`reduce::RowReducer`]).

mod matrix;
mod reduce;
mod scalar;

pub use matrix::ExactMatrix;
pub use reduce::{axpy, sparse_get, to_dense, to_sparse, RowReducer, SpanExpresser, SparseVec};
pub use scalar::{ExactScalar, ParseScalarError};

/// Errors from the solving layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    /// `solve` was asked for a solution of an inconsistent system.
    #[error("linear system is inconsistent")]
    InconsistentSystem,
}
