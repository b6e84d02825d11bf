//! Finite fields, extension towers, characters and cyclotomic numbers.

pub mod characters;
pub mod cyclo;
pub mod field;
pub mod tower;

pub use characters::{additive_char, mult_char, mult_char_exponent, CharacterSpec};
pub use cyclo::Cyclo;
pub use field::{FieldDescriptor, FiniteField, MAX_FIELD_SIZE};
pub use tower::FieldTower;
