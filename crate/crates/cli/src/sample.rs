//! Seeded rejection sampling of nondegenerate points.

use std::sync::Arc;

use gkz_core::arith::FiniteField;
use gkz_core::frobenius::nondegenerate_check;
use gkz_core::lattice::ExponentMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

/// A sampled point and the number of candidates rejected before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sampled {
    pub x: Vec<u64>,
    pub rejections: u32,
    pub seed: u64,
}

/// First candidate in `(k^*)^N` passing the nondegeneracy search.
///
/// The all-ones point is tried first, then uniform draws from a ChaCha8
/// stream seeded with `seed`.
pub fn sample_point(
    field: &Arc<FiniteField>,
    a: &ExponentMatrix,
    m_max: u32,
    budget: u128,
    seed: u64,
    attempts: u32,
) -> Result<Sampled, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q1 = field.unit_order() as i64;
    for k in 0..attempts {
        let x: Vec<u64> = if k == 0 {
            vec![1; a.ncols()]
        } else {
            (0..a.ncols()).map(|_| field.exp(rng.gen_range(0..q1))).collect()
        };
        if nondegenerate_check(field, a, &x, m_max, budget)?.nondegenerate {
            return Ok(Sampled { x, rejections: k, seed });
        }
    }
    Err(CliError::Exhausted { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, 1, None).unwrap())
    }

    #[test]
    fn kloosterman_accepts_first_candidate() {
        let a = ExponentMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        let s = sample_point(&field(3), &a, 3, u128::MAX, 0, 8).unwrap();
        assert_eq!(s, Sampled { x: vec![1, 1], rejections: 0, seed: 0 });
    }

    #[test]
    fn deterministic_and_rejecting() {
        // over F_3 the all-ones point gives (t_1 − t_2)^2, degenerate along the edge
        let a = ExponentMatrix::from_rows(vec![vec![2, 1, 0], vec![0, 1, 2]]).unwrap();
        let f = field(3);
        assert!(!nondegenerate_check(&f, &a, &[1, 1, 1], 1, u128::MAX).unwrap().nondegenerate);
        let s1 = sample_point(&f, &a, 2, u128::MAX, 11, 64).unwrap();
        let s2 = sample_point(&f, &a, 2, u128::MAX, 11, 64).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.rejections >= 1);
        assert!(nondegenerate_check(&f, &a, &s1.x, 2, u128::MAX).unwrap().nondegenerate);
    }

    #[test]
    fn exhaustion() {
        // every Euler derivative of a t^5 vanishes in characteristic 5
        let a = ExponentMatrix::from_rows(vec![vec![5]]).unwrap();
        assert!(matches!(sample_point(&field(5), &a, 1, u128::MAX, 0, 10), Err(CliError::Exhausted { attempts: 10 })));
    }
}
