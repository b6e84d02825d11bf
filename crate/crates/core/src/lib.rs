//! Exact finite-field GKZ hypergeometric sums, Stanley weight combinatorics
//! and Frobenius weight verification.

pub mod arith;
pub mod error;
pub mod frobenius;
pub mod lattice;
pub mod mp;
pub mod resonance;
pub mod scalar;
pub mod sums;
pub mod weights;

pub use error::{Error, Result};

/// Cyclotomic number with arbitrary-precision rational coefficients.
pub type CycloNumber = arith::Cyclo<num_rational::BigRational>;
/// Multiprecision real used for embeddings and root finding.
pub type Real = mp::MpFloat;
/// Integer matrix over machine integers.
pub type Matrix = lattice::IntMatrix<i64>;
