//! Stanley's α and β polynomials.
//!
//! For a polytope P and a pointed cone C,
//!
//! ```text
//! β(P) = (T² − 1)^{dim P} + Σ_{Γ ≺ P, Γ ≠ P} (T² − 1)^{dim Γ} α(cone°_P(Γ))
//! α(C) = trunc_{≤ dim C − 1}((1 − T²) β(poly C)),   α({0}) = 1
//! ```
//!
//! where Γ runs over nonempty faces. The face poset of `cone°_P(Γ)` is the
//! upper interval `[Γ, P]`, so both recursions run on posets alone.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::{LatticePolytope, RationalCone};
use crate::weights::poly::WeightPolynomial;
use crate::weights::poset::{GradedPoset, PosetKey};

#[derive(Default)]
struct Memo {
    alpha: HashMap<PosetKey, WeightPolynomial>,
    beta: HashMap<PosetKey, WeightPolynomial>,
}

fn memo() -> &'static Mutex<Memo> {
    static MEMO: OnceLock<Mutex<Memo>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// α of a cone given by its face poset, which must have a bottom element of rank 0.
pub fn alpha_poset(c: &GradedPoset) -> WeightPolynomial {
    let d = c.rank();
    if d == 0 {
        return WeightPolynomial::one();
    }
    let key = c.canonical_key();
    if let Some(v) = memo().lock().expect("memo lock").alpha.get(&key) {
        return v.clone();
    }
    let poly = c.without_bottom();
    let one_minus_t2 = WeightPolynomial::from_coeffs(vec![1, 0, -1]);
    let a = (&one_minus_t2 * &beta_poset(&poly)).truncate((d - 1) as usize);
    memo().lock().expect("memo lock").alpha.insert(key, a.clone());
    a
}

/// β of a polytope given by its face poset (nonempty faces only).
pub fn beta_poset(p: &GradedPoset) -> WeightPolynomial {
    let top = p.top();
    let d = p.dim(top);
    let key = p.canonical_key();
    if let Some(v) = memo().lock().expect("memo lock").beta.get(&key) {
        return v.clone();
    }
    let u = WeightPolynomial::t2_minus_one();
    let mut b = u.pow(d as usize);
    for g in (0..p.len()).filter(|&g| g != top) {
        let a = alpha_poset(&p.interval_above(g));
        b = &b + &(&u.pow(p.dim(g) as usize) * &a);
    }
    memo().lock().expect("memo lock").beta.insert(key, b.clone());
    b
}

/// α(C) for a pointed rational cone.
pub fn alpha(c: &RationalCone) -> Result<WeightPolynomial> {
    if !c.is_pointed() {
        return Err(Error::NotPointed);
    }
    Ok(alpha_poset(&GradedPoset::from_face_lattice(c.face_lattice())))
}

/// β(P) for a lattice polytope.
pub fn beta(p: &LatticePolytope) -> WeightPolynomial {
    beta_poset(&GradedPoset::from_face_lattice(p.face_lattice()))
}

/// α(cone°_δ(τ)), computed on the interval `[τ, δ]`.
pub fn alpha_of_quotient(delta: &RationalCone, face: usize) -> WeightPolynomial {
    alpha_poset(&GradedPoset::from_face_lattice(delta.face_lattice()).interval_above(face))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{cone_of_face, hull, quotient_cone, FaceOf};

    fn simplicial(d: usize) -> RationalCone {
        let gens = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                e
            })
            .collect();
        RationalCone::new(d, gens).unwrap()
    }

    #[test]
    fn golden_values() {
        let ray = RationalCone::new(1, vec![vec![1]]).unwrap();
        assert_eq!(alpha(&ray).unwrap(), WeightPolynomial::one());
        for d in 1..=4 {
            assert_eq!(alpha(&simplicial(d)).unwrap(), WeightPolynomial::one(), "dim {d}");
        }
        let seg = hull(1, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(beta(&seg).coeffs(), &[1, 0, 1]);
        let sq = hull(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(beta(&sq).coeffs(), &[1, 0, 2, 0, 1]);
        let cs = RationalCone::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(alpha(&cs).unwrap().coeffs(), &[1, 0, 1]);
        let point = hull(2, vec![vec![1, 1]]).unwrap();
        assert_eq!(beta(&point), WeightPolynomial::one());
        let zero = RationalCone::new(2, vec![]).unwrap();
        assert_eq!(alpha(&zero).unwrap(), WeightPolynomial::one());
        let line = RationalCone::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(alpha(&line), Err(Error::NotPointed));
    }

    #[test]
    fn even_powers_and_degree_bounds() {
        let polys = [
            hull(2, vec![vec![0, 0], vec![2, 0], vec![0, 1], vec![1, 2]]).unwrap(),
            hull(3, (0..8).map(|b| vec![b & 1, b >> 1 & 1, b >> 2 & 1]).collect()).unwrap(),
            hull(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -1, 0], vec![0, 0, 1], vec![0, 0, -1]]).unwrap(),
            hull(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap(),
        ];
        for p in &polys {
            let b = beta(p);
            assert!(b.only_even_powers(), "{b}");
            assert_eq!(b.degree(), Some(2 * p.dim()));
            let l = p.face_lattice();
            for g in 0..l.len() {
                let c = cone_of_face(FaceOf::Polytope(p), g).unwrap();
                let q = quotient_cone(&c, 0).unwrap();
                let a = alpha(&q).unwrap();
                assert!(a.only_even_powers());
                let dim = p.dim() - l.face(g).dim;
                if dim > 0 {
                    assert!(a.degree().unwrap() < dim);
                }
            }
        }
    }

    #[test]
    fn interval_matches_geometric_quotient() {
        // cone°_P(Γ) computed geometrically has the face poset of [Γ, P]
        let p = hull(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let poset = GradedPoset::from_face_lattice(p.face_lattice());
        for g in 0..p.face_lattice().len() {
            let c = cone_of_face(FaceOf::Polytope(&p), g).unwrap();
            let q = quotient_cone(&c, 0).unwrap();
            assert!(q.is_pointed());
            let geo = GradedPoset::from_face_lattice(q.face_lattice());
            assert_eq!(geo.canonical_key(), poset.interval_above(g).canonical_key());
        }
    }

    #[test]
    fn combinatorial_invariance() {
        let a = RationalCone::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        let b = RationalCone::new(3, vec![vec![0, 0, 1], vec![2, 0, 1], vec![0, 3, 1], vec![3, 2, 1]]).unwrap();
        assert_eq!(alpha(&a).unwrap(), alpha(&b).unwrap());
    }
}
