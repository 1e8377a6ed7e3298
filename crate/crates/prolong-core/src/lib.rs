//! Exact computation of supertranslation algebras and their maximal
//! transitive prolongations.
//!
//! The pipeline goes bottom-up:
//!
//! * [`exactlin`] — Gaussian-rational scalars and exact dense/sparse linear
//!   algebra (rank, kernel, solve). Everything else is built on top of it.
//! * [`clifford`] — gamma-matrix realizations of the Clifford algebra of a
//!   complex orthogonal space `V`, the spinorial `so(V)` action, chirality.
//! * [`supertranslation`] — admissible bilinear forms, the space of invariant
//!   bracket tensors `Γ: S²(W) → V`, and supertranslation / super-Poincaré
//!   algebras built from them.
//! * [`gradedlie`] — structure-constant container for consistently Z-graded
//!   Lie superalgebras, with super-Jacobi verification and ideal closures.
//! * [`tanaka`] — the degree-by-degree maximal transitive prolongation of a
//!   depth-2 negatively graded algebra, with recursive bracket assembly.
//! * [`analysis`] — structural decomposition of prolongation output (grading
//!   element, internal symmetries, minimal ideal, the `φ`, `ψ_v` and `α`
//!   maps) and the classification verdict.
//! * [`models`] — independent reference models: graded matrix superalgebras
//!   `gl`/`sl`/`pgl`/`osp`, the `K(1|N)` dimension oracle and the expected
//!   classification rows.
//!
//! All arithmetic is exact over the Gaussian rationals; there is no floating
//! point anywhere in the crate.

pub mod analysis;
pub mod clifford;
pub mod exactlin;
pub mod gradedlie;
pub mod models;
pub mod report;
pub mod supertranslation;
pub mod tanaka;

pub use exactlin::{ExactMatrix, ExactScalar};
pub use gradedlie::GradedSuperalgebra;
pub use supertranslation::{BracketTensor, SupertranslationAlgebra};
pub use tanaka::{maximal_prolongation, ProlongationOptions, ProlongationResult};
