//! Leavitt path algebras of finite directed graphs.
//!
//! The crate builds `L_K(E)` with an exact normal form, decides whether the
//! algebra is graded self-injective (no cycle has an exit), produces the
//! explicit graded isomorphism onto a product of shifted matrix algebras
//! over `K` and `K[x^t, x^-t]`, and uses it to compute graded inner inverses
//! and idempotent type data.

pub mod corpus;
pub mod gmatrix;
pub mod graph;
pub mod linalg;
pub mod lpa;
pub mod regularity;
pub mod sample;
pub mod scalar;
pub mod structure;

pub use graph::{Cycle, EdgeId, Graph, GraphError, Path, VertexId};
pub use lpa::{Degree, LeavittPathAlgebra, LpaElement, LpaError, Monomial};
pub use scalar::{Field, FieldElement, LaurentElement, ScalarError};
pub use structure::{decompose, phi, DecompositionReport, PhiMap, StructureError, TypeReport};
