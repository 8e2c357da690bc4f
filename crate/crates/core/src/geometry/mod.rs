//! Quadrics, polarities, reguli and the Klein correspondence.

pub mod klein;
pub mod quadric;
pub mod symplectic;

pub use klein::{
    compound2, gamma, klein_quadric, plane_classes, plucker, plucker_inv, plucker_span,
    plucker_vector, KleinModel, PLUCKER_PAIRS,
};
pub use quadric::{reguli, Polarity, Quadric, Regulus};
pub use symplectic::{symplectic_fit, SymplecticForm};
