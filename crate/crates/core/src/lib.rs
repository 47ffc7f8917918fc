//! Derived-discrete algebras Λ(n,m): indecomposable complexes, their morphism
//! combinatorics, the Γ presentation of the homotopy category and its
//! rigidity, all checked against an exact linear-algebra oracle.

pub mod algebra;
pub mod complex;
pub mod error;
pub mod gamma;
pub mod homcomb;
pub mod indecomposables;
pub mod linalg;
pub mod rigidity;
pub mod verify;

pub use algebra::{Algebra, AlgebraSpec, Path, PathCombination, PathId, Vertex};
pub use error::{Error, Result};

/// Exact field elements.
pub type Scalar = num_rational::Rational64;
