//! The T-set, the integer e(Δ,χ) and the weight polynomial E(Δ,χ).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::characters::CharacterSpec;
use crate::error::{Error, Result};
use crate::lattice::{hull, normalized_volume, span_lattice, ExponentMatrix};
use crate::resonance::factor_through_face;
use crate::weights::poly::WeightPolynomial;
use crate::weights::stanley::alpha_of_quotient;

/// A proper face τ of δ through which χ factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauFace {
    pub face: usize,
    pub dim: usize,
    pub chi_tau: Vec<u64>,
    /// Number of columns lying in τ.
    pub n_tau: usize,
    pub columns: Vec<usize>,
    pub basis: Vec<Vec<i64>>,
}

/// Proper faces τ of δ with χ pulled back from the face torus of τ.
pub fn t_set(a: &ExponentMatrix, chi: &CharacterSpec) -> Vec<TauFace> {
    let delta = a.cone();
    let lattice = delta.face_lattice();
    let top = lattice.top();
    (0..lattice.len())
        .filter(|&i| i != top)
        .filter_map(|i| {
            let sub = span_lattice(&delta, i);
            let f = factor_through_face(chi, &sub);
            let chi_tau = f.chi_tau?;
            let columns: Vec<usize> = (0..a.ncols()).filter(|&j| sub.coordinates(a.column(j)).is_some()).collect();
            Some(TauFace {
                face: i,
                dim: lattice.face(i).dim,
                chi_tau,
                n_tau: columns.len(),
                columns,
                basis: sub.basis().to_vec(),
            })
        })
        .collect()
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(dim τ)!·vol(Δ ∩ τ)`; a point counts 1.
fn face_volume(a: &ExponentMatrix, tau: &TauFace) -> u64 {
    let mut pts = vec![vec![0; a.n()]];
    pts.extend(tau.columns.iter().map(|&j| a.column(j).to_vec()));
    normalized_volume(&hull(a.n(), pts).expect("columns have length n"))
}

/// Δ ∩ τ in coordinates of `M_τ`, with χ_τ.
fn sub_instance(a: &ExponentMatrix, chi: &CharacterSpec, tau: &TauFace) -> Result<(ExponentMatrix, CharacterSpec)> {
    let sub = span_lattice(&a.cone(), tau.face);
    let cols = tau
        .columns
        .iter()
        .map(|&j| sub.coordinates(a.column(j)).ok_or(Error::MissingDescent(tau.face)))
        .collect::<Result<Vec<_>>>()?;
    let chi_tau = CharacterSpec::new(&tau.chi_tau.iter().map(|x| *x as i64).collect::<Vec<_>>(), chi.order());
    Ok((ExponentMatrix::from_columns(tau.dim, cols)?, chi_tau))
}

/// e(Δ,χ).
pub fn e_value(a: &ExponentMatrix, chi: &CharacterSpec) -> i64 {
    let (n, big_n) = (a.n(), a.ncols());
    let delta = a.cone();
    let mut e = sign(big_n) * normalized_volume(&a.newton_polytope()) as i64;
    for tau in t_set(a, chi) {
        let al = alpha_of_quotient(&delta, tau.face).eval_at_one();
        e += sign(n - tau.dim + big_n) * face_volume(a, &tau) as i64 * al;
    }
    e
}

/// E(Δ,χ), recursing through the faces in the T-set.
pub fn e_polynomial(a: &ExponentMatrix, chi: &CharacterSpec) -> Result<WeightPolynomial> {
    let (n, big_n) = (a.n(), a.ncols());
    let delta = a.cone();
    let mut out = WeightPolynomial::monomial(e_value(a, chi), n + big_n);
    for tau in t_set(a, chi) {
        let (sub, chi_tau) = sub_instance(a, chi, &tau)?;
        let inner = e_polynomial(&sub, &chi_tau)?;
        let al = alpha_of_quotient(&delta, tau.face);
        let term = (&inner * &al).shift(big_n - tau.n_tau).scale(sign(n - tau.dim + big_n - tau.n_tau));
        out = &out - &term;
    }
    Ok(out)
}

/// Predicted Frobenius spectrum on a generic stalk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumPrediction {
    pub degree: u64,
    /// Weight `v` ↦ number of eigenvalues with `|α| = q^{v/2}`.
    pub weights: BTreeMap<i64, u64>,
    #[serde(skip)]
    pub sign: i64,
    /// Every nonzero coefficient of E has sign `(−1)^N`.
    #[serde(skip)]
    pub sign_consistent: bool,
}

/// Reads off `{w − N ↦ |e_w|}` from E.
pub fn expected_spectrum(e: &WeightPolynomial, n: usize, big_n: usize, vol: u64) -> Result<SpectrumPrediction> {
    if e.degree().is_some_and(|d| d > n + big_n) {
        return Err(Error::InvalidInput(format!("E has degree above n + N = {}", n + big_n)));
    }
    let s = sign(big_n);
    let mut weights = BTreeMap::new();
    let mut total = 0i64;
    let mut sign_consistent = true;
    for (w, c) in e.terms() {
        total += c.abs();
        sign_consistent &= c.signum() == s;
        *weights.entry(w as i64 - big_n as i64).or_insert(0) += c.unsigned_abs();
    }
    if total != vol as i64 {
        return Err(Error::CoefficientSumMismatch { sum: total, rank: vol as i64 });
    }
    Ok(SpectrumPrediction { degree: vol, weights, sign: s, sign_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::stanley::alpha;

    fn inst(rows: Vec<Vec<i64>>) -> ExponentMatrix {
        ExponentMatrix::from_rows(rows).unwrap()
    }

    fn check_invariants(a: &ExponentMatrix, chi: &CharacterSpec) -> WeightPolynomial {
        let e = e_polynomial(a, chi).unwrap();
        let vol = normalized_volume(&a.newton_polytope()) as i64;
        assert_eq!(e.eval_at_one(), sign(a.ncols()) * vol, "E(1) for {a:?}");
        assert!(e.degree().map_or(true, |d| d <= a.n() + a.ncols()));
        assert_eq!(e.coeff(a.n() + a.ncols()), e_value(a, chi));
        let delta = a.cone();
        for tau in t_set(a, chi) {
            let al = alpha_of_quotient(&delta, tau.face);
            assert!(al.only_even_powers());
            if a.n() > tau.dim {
                assert!(al.degree().unwrap() < a.n() - tau.dim);
            }
        }
        e
    }

    #[test]
    fn kloosterman() {
        let a = inst(vec![vec![1, -1]]);
        let chi = CharacterSpec::trivial(1, 4);
        assert!(t_set(&a, &chi).is_empty());
        assert_eq!(e_value(&a, &chi), 2);
        let e = check_invariants(&a, &chi);
        assert_eq!(e, WeightPolynomial::monomial(2, 3));
        let s = expected_spectrum(&e, 1, 2, 2).unwrap();
        assert_eq!(s.weights, BTreeMap::from([(1, 2)]));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"degree":2,"weights":{"1":2}}"#);
    }

    #[test]
    fn single_monomial() {
        let a = inst(vec![vec![1]]);
        let chi = CharacterSpec::trivial(1, 4);
        let t = t_set(&a, &chi);
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].dim, t[0].n_tau, t[0].chi_tau.clone()), (0, 0, vec![]));
        assert_eq!(e_value(&a, &chi), 0);
        let e = check_invariants(&a, &chi);
        assert_eq!(e, WeightPolynomial::monomial(-1, 1));
        let s = expected_spectrum(&e, 1, 1, 1).unwrap();
        assert_eq!(s.weights, BTreeMap::from([(0, 1)]));
        assert!(s.sign_consistent);
    }

    #[test]
    fn quadratic() {
        let a = inst(vec![vec![1, 2]]);
        let chi = CharacterSpec::trivial(1, 4);
        assert_eq!(e_value(&a, &chi), 1);
        let e = check_invariants(&a, &chi);
        assert_eq!(e.to_string(), "T^3 + T^2");
        let s = expected_spectrum(&e, 1, 2, 2).unwrap();
        assert_eq!(s.weights, BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn nonresonant_square() {
        let a = inst(vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let chi = CharacterSpec::new(&[1, 1], 4);
        assert!(t_set(&a, &chi).is_empty());
        let e = check_invariants(&a, &chi);
        assert_eq!(e, WeightPolynomial::monomial(-2, 5));
        let s = expected_spectrum(&e, 2, 3, 2).unwrap();
        assert_eq!(s.weights, BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn coefficient_sum_mismatch() {
        let e = WeightPolynomial::monomial(2, 3);
        assert_eq!(
            expected_spectrum(&e, 1, 2, 3),
            Err(Error::CoefficientSumMismatch { sum: 2, rank: 3 })
        );
    }

    #[test]
    fn corpus_invariants() {
        let corpus = [
            vec![vec![1, 0, 1], vec![0, 1, 1]],
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]],
            vec![vec![2, 1, 0], vec![0, 1, 2]],
            vec![vec![1, 0, -1], vec![0, 1, -1]],
            vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]],
            vec![vec![1, 3]],
            vec![vec![2, 3]],
        ];
        for rows in corpus {
            let a = inst(rows);
            for order in [1u64, 2, 4, 6] {
                let n = a.n();
                for idx in 0..order.pow(n as u32) {
                    let c: Vec<i64> = (0..n).map(|i| (idx / order.pow(i as u32) % order) as i64).collect();
                    check_invariants(&a, &CharacterSpec::new(&c, order));
                }
            }
        }
    }

    #[test]
    fn ray_alpha_is_one() {
        let ray = crate::lattice::RationalCone::new(1, vec![vec![1]]).unwrap();
        assert_eq!(alpha(&ray).unwrap().eval_at_one(), 1);
    }
}
