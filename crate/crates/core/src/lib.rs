//! Exact constructions of constant-dimension subspace codes from finite
//! geometry, with the machinery needed to verify them.
//!
//! Everything is deterministic: subspaces are stored in canonical reduced row
//! echelon form and every collection returned by a construction is sorted.

pub mod algebra;
pub mod bundle;
pub mod cdc6;
pub mod cdc9;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod orbit6;
pub mod verify;

pub use error::{Error, Result};
