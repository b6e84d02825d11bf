//! Exact integer lattice geometry.

pub mod faces;
pub mod matrix;
pub mod ops;

pub use faces::{hull, Face, FaceLattice, LatticePolytope, Mask, RationalCone};
pub use matrix::{IntMatrix, Snf};
pub use ops::{
    cone_of_face, extend_to_unimodular, nonconfluence_vector, normalized_volume, poly_of_cone, positive_hull,
    quotient_cone, smith_normal_form, span_lattice, ExponentMatrix, FaceOf, Sublattice,
};
