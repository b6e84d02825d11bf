//! Stanley polynomials and weight predictions.

pub mod poly;
pub mod poset;
pub mod predict;
pub mod stanley;

pub use poly::WeightPolynomial;
pub use poset::{GradedPoset, PosetKey};
pub use predict::{e_polynomial, e_value, expected_spectrum, t_set, SpectrumPrediction, TauFace};
pub use stanley::{alpha, alpha_of_quotient, alpha_poset, beta, beta_poset};
