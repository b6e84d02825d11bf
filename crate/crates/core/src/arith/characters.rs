//! Additive and multiplicative characters with values in cyclotomic fields.
//!
//! ψ_m(x) = ζ_p^{Tr_{k_m/F_p}(x)} and χ^{(m)}(t) = χ(N_{k_m/k}(t)), where χ is
//! named by an exponent vector `c` against the fixed generator `g` of k:
//! χ(g^{a_1}, …, g^{a_n}) = ζ_{q-1}^{Σ c_i a_i}.

use serde::{Deserialize, Serialize};

use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::CycloNumber;

/// Exponent vector `c ∈ (Z/(q−1))^n` naming a character of (k^*)^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterSpec {
    #[serde(rename = "chi")]
    c: Vec<u64>,
    #[serde(skip)]
    order: u64,
}

impl CharacterSpec {
    /// `order` is q − 1; entries are reduced into `[0, q − 1)`.
    pub fn new(c: &[i64], order: u64) -> Self {
        assert!(order >= 1);
        CharacterSpec {
            c: c.iter().map(|x| x.rem_euclid(order as i64) as u64).collect(),
            order,
        }
    }

    pub fn trivial(n: usize, order: u64) -> Self {
        CharacterSpec { c: vec![0; n], order }
    }

    /// Re-attaches the group order after deserialization.
    pub fn with_order(self, order: u64) -> Self {
        let c: Vec<i64> = self.c.iter().map(|x| *x as i64).collect();
        CharacterSpec::new(&c, order)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.c
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.c.iter().all(|x| *x == 0)
    }

    pub fn inverse(&self) -> Self {
        let c: Vec<i64> = self.c.iter().map(|x| -(*x as i64)).collect();
        CharacterSpec::new(&c, self.order)
    }

    /// The one-variable character χ_i.
    pub fn component(&self, i: usize) -> CharacterSpec {
        CharacterSpec { c: vec![self.c[i]], order: self.order }
    }

    /// `Σ c_i a_i mod (q − 1)` for a point given by base-field logs.
    pub fn pair(&self, logs: &[u64]) -> u64 {
        let o = self.order as u128;
        (self.c.iter().zip(logs).map(|(c, a)| *c as u128 * *a as u128 % o).sum::<u128>() % o) as u64
    }
}

/// ψ_m(x) for x ∈ k_m, a p-th root of unity.
pub fn additive_char(tower: &FieldTower, x: u64) -> Result<CycloNumber> {
    let ext = tower.ext();
    if !ext.contains(x) {
        return Err(Error::NotAnElement(x));
    }
    let p = ext.characteristic();
    Ok(CycloNumber::zeta(p, ext.absolute_trace(x) as i64))
}

/// Exponent `e` with χ^{(m)}(t) = ζ_{q−1}^e.
pub fn mult_char_exponent(tower: &FieldTower, chi: &CharacterSpec, t: &[u64]) -> Result<u64> {
    if chi.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "character has {} components, point has {}",
            chi.len(),
            t.len()
        )));
    }
    let logs = t
        .iter()
        .map(|x| match tower.ext().discrete_log(*x) {
            Ok(l) => Ok(tower.norm_log(l)),
            Err(Error::ZeroElement) => Err(Error::CharacterOnZero),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chi.pair(&logs))
}

/// χ^{(m)}(t) for t ∈ (k_m^*)^n, a (q−1)-th root of unity.
pub fn mult_char(tower: &FieldTower, chi: &CharacterSpec, t: &[u64]) -> Result<CycloNumber> {
    let e = mult_char_exponent(tower, chi, t)?;
    Ok(CycloNumber::zeta(chi.order(), e as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::FiniteField;
    use std::sync::Arc;

    fn tower(p: u64, e: u32, m: u32) -> FieldTower {
        FieldTower::new(Arc::new(FiniteField::new(p, e, None).unwrap()), m).unwrap()
    }

    #[test]
    fn additive_examples() {
        let t = tower(2, 1, 1);
        assert_eq!(additive_char(&t, 1).unwrap(), CycloNumber::from_integer(2, -1));
        let t4 = tower(2, 2, 1);
        let g = t4.base().generator();
        assert_eq!(additive_char(&t4, g).unwrap(), CycloNumber::from_integer(2, -1));
        assert_eq!(additive_char(&t4, 0).unwrap(), CycloNumber::one(2));
    }

    #[test]
    fn multiplicative_examples() {
        let t = tower(5, 1, 1);
        let chi = CharacterSpec::new(&[1], 4);
        assert_eq!(mult_char(&t, &chi, &[4]).unwrap(), CycloNumber::from_integer(4, -1));
        let triv = CharacterSpec::trivial(2, 4);
        for a in 1..5 {
            for b in 1..5 {
                assert_eq!(mult_char(&t, &triv, &[a, b]).unwrap(), CycloNumber::one(4));
            }
        }
        assert_eq!(mult_char(&t, &chi, &[0]), Err(Error::CharacterOnZero));
    }

    #[test]
    fn lifted_character_is_norm_composition() {
        // χ^{(2)}(t) = χ(t^{1+q})
        let t2 = tower(3, 1, 2);
        let chi = CharacterSpec::new(&[1], 2);
        for x in 1..9 {
            let n = t2.ext().pow(x, 4).unwrap();
            let direct = mult_char(&FieldTower::trivial(t2.base_arc().clone()), &chi, &[t2.descend(n).unwrap()]);
            assert_eq!(mult_char(&t2, &chi, &[x]).unwrap(), direct.unwrap());
        }
    }

    #[test]
    fn homomorphism_properties_exhaustive() {
        for (p, e) in [(2, 2), (3, 1), (3, 2), (5, 1), (7, 1), (2, 3)] {
            let t = tower(p, e, 1);
            let k = t.base();
            let q1 = k.unit_order();
            for x in 0..k.size() {
                for y in 0..k.size() {
                    let lhs = additive_char(&t, k.add(x, y)).unwrap();
                    let rhs = &additive_char(&t, x).unwrap() * &additive_char(&t, y).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
            for c in 0..q1 {
                let chi = CharacterSpec::new(&[c as i64], q1);
                for x in 1..k.size() {
                    for y in 1..k.size() {
                        let lhs = mult_char(&t, &chi, &[k.mul(x, y)]).unwrap();
                        let rhs = &mult_char(&t, &chi, &[x]).unwrap() * &mult_char(&t, &chi, &[y]).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_sums() {
        for (p, e) in [(2, 2), (3, 2), (5, 1), (7, 1)] {
            let t = tower(p, e, 1);
            let k = t.base();
            let q1 = k.unit_order();
            let s = (0..k.size()).fold(CycloNumber::zero(p), |acc, x| &acc + &additive_char(&t, x).unwrap());
            assert!(s.is_zero());
            for c in 0..q1 {
                let chi = CharacterSpec::new(&[c as i64], q1);
                let s = (1..k.size())
                    .fold(CycloNumber::zero(q1), |acc, x| &acc + &mult_char(&t, &chi, &[x]).unwrap());
                let expected = if c == 0 { q1 as i64 } else { 0 };
                assert_eq!(s, CycloNumber::from_integer(q1, expected));
            }
        }
    }

    #[test]
    fn additive_character_restricted_to_base() {
        // ψ_m(embed(x)) = ψ(m·x)
        for (p, e, m) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (3, 1, 3), (5, 1, 2)] {
            let t = tower(p, e, m);
            let base = FieldTower::trivial(t.base_arc().clone());
            for x in 0..t.base().size() {
                let mx = t.base().mul(t.base().from_int(m as i64), x);
                assert_eq!(
                    additive_char(&t, t.embed(x).unwrap()).unwrap(),
                    additive_char(&base, mx).unwrap()
                );
            }
        }
    }

    #[test]
    fn character_spec_json() {
        let chi = CharacterSpec::new(&[1, 3], 4);
        assert_eq!(serde_json::to_string(&chi).unwrap(), r#"{"chi":[1,3]}"#);
        let back: CharacterSpec = serde_json::from_str(r#"{"chi":[5,0]}"#).unwrap();
        assert_eq!(back.with_order(4).exponents(), &[1, 0]);
    }
}
