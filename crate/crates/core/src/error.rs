use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p not prime: {0}")]
    NotPrime(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field too large for a discrete-log table: q = {0}")]
    FieldTooLarge(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {degree}")]
    ReducibleModulus { degree: u32 },
    #[error("element {0} is not in the field")]
    NotAnElement(u64),
    #[error("discrete log of zero")]
    ZeroElement,
    #[error("character evaluated at a zero coordinate")]
    CharacterOnZero,
    #[error("vector is not primitive (gcd {0})")]
    NotPrimitive(String),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have full row rank {expected} (rank {rank})")]
    RankDeficient { expected: usize, rank: usize },
    #[error("enumeration of {needed} terms exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("character must be nontrivial: {0}")]
    TrivialCharacter(String),
    #[error("exponent matrix is confluent (no functional maps every column to 1)")]
    Confluent,
    #[error("descended character missing for face {0}")]
    MissingDescent(usize),
    #[error("need at least {needed} power sums, got {got}")]
    InsufficientPowerSums { needed: usize, got: usize },
    #[error("power sum S_{index} is inconsistent with a degree-{degree} characteristic polynomial")]
    InconsistentPowerSums { degree: usize, index: usize },
    #[error("weight coefficients sum to {sum} but the rank is {rank}")]
    CoefficientSumMismatch { sum: i64, rank: i64 },
    #[error("eigenvalue weight {value} is not within {tol} of an integer in [0, {max}]")]
    WeightNotIntegral { value: f64, tol: f64, max: i64 },
    #[error("zero eigenvalue has no weight")]
    ZeroEigenvalue,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
