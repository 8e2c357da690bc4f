//! Finite fields, matrices over them, and canonical subspaces.

pub mod field;
pub mod matrix;
pub mod subspace;
pub mod tower;

pub use field::{prime_power, Elem, Field};
pub use matrix::{rank_slice, rref_slice, Matrix};
pub use subspace::{
    all_points, all_subspaces, gaussian_count, normalize, normalized_vectors, Subspace,
};
pub use tower::Tower;
