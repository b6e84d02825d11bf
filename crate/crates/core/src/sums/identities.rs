//! Classical identities around the hypergeometric sum, each side evaluated
//! by its own enumeration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::characters::{mult_char_exponent, CharacterSpec};
use crate::arith::field::FiniteField;
use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::lattice::{extend_to_unimodular, nonconfluence_vector, ExponentMatrix};
use crate::sums::{check_budget, decode_point, gauss_sum, hyp_sum, GroupRing, SumQuery, DEFAULT_BUDGET};
use crate::CycloNumber;

/// Outcome of an identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: CycloNumber,
    pub rhs: CycloNumber,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(lhs: CycloNumber, rhs: CycloNumber) -> Self {
        let holds = lhs == rhs;
        IdentityCheck { lhs, rhs, holds }
    }
}

/// Laurent polynomial over k_m: coefficients are field elements, exponents integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    pub terms: Vec<(u64, Vec<i64>)>,
}

impl LaurentPolynomial {
    pub fn new(terms: Vec<(u64, Vec<i64>)>) -> Self {
        LaurentPolynomial { terms }
    }

    pub fn zero() -> Self {
        LaurentPolynomial { terms: Vec::new() }
    }

    /// Value at a torus point.
    pub fn eval(&self, f: &FiniteField, t: &[u64]) -> u64 {
        self.terms.iter().fold(0, |acc, (c, e)| {
            let mono = e.iter().zip(t).fold(*c, |m, (k, ti)| f.mul(m, f.pow(*ti, *k).expect("torus point")));
            f.add(acc, mono)
        })
    }
}

/// Σ over `(k_m^*)^n` of `ζ_p^tr ζ_{q−1}^e` for `term(t) = Some((tr, e))`.
fn torus_sum<F>(tower: &FieldTower, n: usize, budget: u128, term: F) -> Result<CycloNumber>
where
    F: Fn(&[u64]) -> Option<(u64, u64)> + Sync,
{
    let ext = tower.ext();
    let total = check_budget(ext, n, budget)?;
    let (p, order) = (ext.characteristic(), tower.base().unit_order());
    let q1 = ext.unit_order();
    let chunk = q1 as u128;
    let ring = (0..total.div_ceil(chunk) as u64)
        .into_par_iter()
        .fold(
            || GroupRing::new(p, order),
            |mut ring, c| {
                let mut logs = vec![0u64; n];
                let start = c as u128 * chunk;
                for idx in start..(start + chunk).min(total) {
                    decode_point(idx, q1, &mut logs);
                    let t: Vec<u64> = logs.iter().map(|l| ext.exp(*l as i64)).collect();
                    if let Some((tr, e)) = term(&t) {
                        ring.push(tr, e);
                    }
                }
                ring
            },
        )
        .reduce(|| GroupRing::new(p, order), GroupRing::merge);
    Ok(ring.finish())
}

/// `c·dlog N(y) mod (q − 1)` for nonzero `y ∈ k_m`.
fn char_exp(tower: &FieldTower, c: u64, y: u64) -> u64 {
    mult_char_exponent(tower, &CharacterSpec::new(&[c as i64], tower.base().unit_order()), &[y]).expect("nonzero")
}

/// The four quantities in `S2 = ∏ g(χ_i^{-1}, ψ)·S1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedTwistedReport {
    pub s1: CycloNumber,
    pub s2: CycloNumber,
    pub gauss_product: CycloNumber,
    pub holds: bool,
}

/// Compares the mixed sum S1 (with χ_i(0) = 0) and the twisted sum S2.
pub fn mixed_vs_twisted_identity(
    tower: &FieldTower,
    n: usize,
    f: &LaurentPolynomial,
    fs: &[LaurentPolynomial],
    chis: &CharacterSpec,
    budget: u128,
) -> Result<MixedTwistedReport> {
    if fs.len() != chis.len() {
        return Err(Error::DimensionMismatch(format!("{} polynomials, {} characters", fs.len(), chis.len())));
    }
    if let Some(i) = chis.exponents().iter().position(|c| *c == 0) {
        return Err(Error::TrivialCharacter(format!("χ_{} is trivial", i + 1)));
    }
    let ext = tower.ext();
    let order = tower.base().unit_order();
    let m = fs.len();
    let s1 = torus_sum(tower, n, budget, |t| {
        let mut e = 0;
        for (fi, c) in fs.iter().zip(chis.exponents()) {
            let v = fi.eval(ext, t);
            if v == 0 {
                return None;
            }
            e += char_exp(tower, *c, v);
        }
        Some((ext.absolute_trace(f.eval(ext, t)), e % order))
    })?;
    let s2 = torus_sum(tower, n + m, budget, |ts| {
        let (t, s) = ts.split_at(n);
        let mut arg = f.eval(ext, t);
        let mut e = 0;
        for ((fi, c), si) in fs.iter().zip(chis.exponents()).zip(s) {
            arg = ext.add(arg, ext.mul(*si, fi.eval(ext, t)));
            e += char_exp(tower, order - c, *si);
        }
        Some((ext.absolute_trace(arg), e % order))
    })?;
    let mut gauss_product = CycloNumber::one(1);
    for i in 0..m {
        gauss_product = &gauss_product * &gauss_sum(&chis.component(i).inverse(), tower)?;
    }
    let holds = s2 == &gauss_product * &s1;
    Ok(MixedTwistedReport { s1, s2, gauss_product, holds })
}

/// `A = (I_{n+m−1}, w)` with `w = (−1, …, −1, 1, …, 1)` (`n − 1` and `m` entries).
pub fn katz_matrix(n: usize, m: usize) -> Result<ExponentMatrix> {
    if n == 0 || n + m < 2 {
        return Err(Error::InvalidInput(format!("Katz sums need n ≥ 1 and n + m ≥ 2, got ({n}, {m})")));
    }
    let d = n + m - 1;
    let rows = (0..d)
        .map(|i| {
            let mut r = vec![0; d + 1];
            r[i] = 1;
            r[d] = if i < n - 1 { -1 } else { 1 };
            r
        })
        .collect();
    ExponentMatrix::from_rows(rows)
}

/// Hyp at `(1, …, 1, −1, …, −1, x)` for [`katz_matrix`] against the explicit
/// sum `Σ χ(t) ψ(t_1 + … + t_{n−1} − t_n − … − t_{n+m−1} + x t_n⋯t_{n+m−1} / (t_1⋯t_{n−1}))`.
pub fn katz_equivalence(tower: &FieldTower, n: usize, m: usize, chis: &CharacterSpec, x: u64) -> Result<IdentityCheck> {
    let a = katz_matrix(n, m)?;
    let ext = tower.ext();
    let d = n + m - 1;
    if chis.len() != d {
        return Err(Error::DimensionMismatch(format!("expected {d} characters, got {}", chis.len())));
    }
    let minus_one = ext.neg(1);
    let mut point = vec![1; n - 1];
    point.extend(std::iter::repeat(minus_one).take(m));
    point.push(x);
    let lhs = hyp_sum(&SumQuery::new(tower, &a, chis, &point))?;
    let order = chis.order();
    let rhs = torus_sum(tower, d, DEFAULT_BUDGET, |t| {
        let (up, down) = t.split_at(n - 1);
        let mut arg = up.iter().fold(0, |s, v| ext.add(s, *v));
        arg = down.iter().fold(arg, |s, v| ext.sub(s, *v));
        let num = down.iter().fold(x, |s, v| ext.mul(s, *v));
        let den = up.iter().fold(1, |s, v| ext.mul(s, *v));
        arg = ext.add(arg, ext.mul(num, ext.inv(den).expect("unit")));
        let e = t.iter().zip(chis.exponents()).map(|(ti, c)| char_exp(tower, *c, *ti)).sum::<u64>() % order;
        Some((ext.absolute_trace(arg), e))
    })?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `A = (I_n, (−1, …, −1)ᵀ)`.
pub fn kloosterman_matrix(n: usize) -> Result<ExponentMatrix> {
    let rows = (0..n)
        .map(|i| {
            let mut r = vec![0; n + 1];
            r[i] = 1;
            r[n] = -1;
            r
        })
        .collect();
    ExponentMatrix::from_rows(rows)
}

/// `Kl(χ)(x) = Σ χ_1(t_1)⋯χ_n(t_n) ψ(t_1 + … + t_n + x/(t_1⋯t_n))`.
pub fn kloosterman_sum(chis: &CharacterSpec, x: u64, tower: &FieldTower) -> Result<CycloNumber> {
    let ext = tower.ext();
    if !ext.contains(x) {
        return Err(Error::NotAnElement(x));
    }
    let order = chis.order();
    torus_sum(tower, chis.len(), DEFAULT_BUDGET, |t| {
        let s = t.iter().fold(0, |s, v| ext.add(s, *v));
        let prod = t.iter().fold(1, |s, v| ext.mul(s, *v));
        let arg = ext.add(s, ext.mul(x, ext.inv(prod).expect("unit")));
        let e = t.iter().zip(chis.exponents()).map(|(ti, c)| char_exp(tower, *c, *ti)).sum::<u64>() % order;
        Some((ext.absolute_trace(arg), e))
    })
}

/// `Hyp(t·x; χ)` against `χ^{-1}(t)·Hyp(x; χ)`.
pub fn homogeneity_check(
    tower: &FieldTower,
    a: &ExponentMatrix,
    chi: &CharacterSpec,
    x: &[u64],
    t: &[u64],
) -> Result<IdentityCheck> {
    let ext = tower.ext();
    if t.len() != a.n() {
        return Err(Error::DimensionMismatch(format!("torus point has {} coordinates, n = {}", t.len(), a.n())));
    }
    let tx: Vec<u64> = a
        .columns()
        .iter()
        .zip(x)
        .map(|(w, xj)| w.iter().zip(t).try_fold(*xj, |acc, (k, ti)| Ok(ext.mul(acc, ext.pow(*ti, *k)?))))
        .collect::<Result<_>>()?;
    let lhs = hyp_sum(&SumQuery::new(tower, a, chi, &tx))?;
    let e = mult_char_exponent(tower, &chi.inverse(), t)?;
    let rhs = &CycloNumber::zeta(chi.order(), e as i64) * &hyp_sum(&SumQuery::new(tower, a, chi, x))?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// The Gauss-sum factorization available when `A` is nonconfluent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonconfluentReport {
    /// `c` with `c·w_j = 1` for all `j`.
    pub c: Vec<i64>,
    /// Unimodular `C` with first row `c`.
    pub change_of_basis: Vec<Vec<i64>>,
    /// Exponents of `χ'_i = ∏_k χ_k^{C_{ik}}`.
    pub chi_prime: Vec<u64>,
    pub hyp: CycloNumber,
    pub gauss: CycloNumber,
    pub reduced: CycloNumber,
    pub holds: bool,
}

/// Checks `Hyp(x; χ) = g(χ'_1, ψ)·Σ_{s, G(s,x) ≠ 0} χ'_2(s_2)⋯χ'_n(s_n) χ'_1^{-1}(G(s, x))`.
pub fn nonconfluent_factorization(
    tower: &FieldTower,
    a: &ExponentMatrix,
    chi: &CharacterSpec,
    x: &[u64],
) -> Result<NonconfluentReport> {
    let c = nonconfluence_vector(a).ok_or(Error::Confluent)?;
    let n = a.n();
    let cm = extend_to_unimodular(&c)?;
    let order = chi.order() as i64;
    let chi_prime: Vec<u64> = (0..n)
        .map(|i| {
            cm.row(i).iter().zip(chi.exponents()).map(|(cik, ck)| cik * *ck as i64).sum::<i64>().rem_euclid(order) as u64
        })
        .collect();
    if chi_prime[0] == 0 {
        return Err(Error::TrivialCharacter("χ'_1 is trivial".into()));
    }
    // w'_{kj} for k ≥ 2
    let w_prime: Vec<Vec<i64>> = a
        .columns()
        .iter()
        .map(|w| (1..n).map(|k| cm.row(k).iter().zip(w).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let ext = tower.ext();
    let inv1 = (order as u64 - chi_prime[0]) % order as u64;
    let reduced = torus_sum(tower, n - 1, DEFAULT_BUDGET, |s| {
        let g = w_prime.iter().zip(x).fold(0, |acc, (w, xj)| {
            let mono = w.iter().zip(s).fold(*xj, |m, (k, si)| ext.mul(m, ext.pow(*si, *k).expect("unit")));
            ext.add(acc, mono)
        });
        if g == 0 {
            return None;
        }
        let e = s.iter().zip(&chi_prime[1..]).map(|(si, ck)| char_exp(tower, *ck, *si)).sum::<u64>()
            + char_exp(tower, inv1, g);
        Some((0, e % order as u64))
    })?;
    let gauss = gauss_sum(&CharacterSpec::new(&[chi_prime[0] as i64], order as u64), tower)?;
    let hyp = hyp_sum(&SumQuery::new(tower, a, chi, x))?;
    let holds = hyp == &gauss * &reduced;
    Ok(NonconfluentReport { c, change_of_basis: cm.to_rows(), chi_prime, hyp, gauss, reduced, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::characters::{additive_char, mult_char};
    use crate::sums::tests::tower;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chars(c: &[i64], order: u64) -> CharacterSpec {
        CharacterSpec::new(c, order)
    }

    #[test]
    fn mixed_twisted_example() {
        let t = tower(5, 1, 1);
        let f = LaurentPolynomial::new(vec![(1, vec![1])]);
        let f1 = LaurentPolynomial::new(vec![(1, vec![1]), (1, vec![0])]);
        let r = mixed_vs_twisted_identity(&t, 1, &f, &[f1], &chars(&[2], 4), DEFAULT_BUDGET).unwrap();
        assert!(r.holds);
        let r = mixed_vs_twisted_identity(&t, 1, &f, &[LaurentPolynomial::zero()], &chars(&[1], 4), DEFAULT_BUDGET)
            .unwrap();
        assert!(r.s1.is_zero() && r.s2.is_zero() && r.holds);
        let r = mixed_vs_twisted_identity(&t, 1, &f, &[], &chars(&[], 4), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.s1, r.s2);
    }

    #[test]
    fn mixed_twisted_refuses_trivial_characters() {
        let t = tower(5, 1, 1);
        let f = LaurentPolynomial::new(vec![(1, vec![1])]);
        let f1 = LaurentPolynomial::new(vec![(1, vec![1]), (1, vec![0])]);
        let r = mixed_vs_twisted_identity(&t, 1, &f, &[f1], &chars(&[0], 4), DEFAULT_BUDGET);
        assert!(matches!(r, Err(Error::TrivialCharacter(_))));
    }

    #[test]
    fn katz_and_kloosterman() {
        for p in [3u64, 5] {
            let t = tower(p, 1, 1);
            let o = p - 1;
            for (n, m) in [(1, 1), (2, 1), (1, 2)] {
                for x in 0..p {
                    let c: Vec<i64> = (0..(n + m - 1) as i64).map(|i| (i + x as i64) % o as i64).collect();
                    assert!(katz_equivalence(&t, n, m, &chars(&c, o), x).unwrap().holds, "p={p} ({n},{m}) x={x}");
                }
            }
            for x in 0..p {
                let kl = kloosterman_sum(&chars(&[1 % o as i64], o), x, &t).unwrap();
                let a = kloosterman_matrix(1).unwrap();
                let h = hyp_sum(&SumQuery::new(&t, &a, &chars(&[1 % o as i64], o), &[1, x])).unwrap();
                assert_eq!(kl, h);
            }
        }
        let t3 = tower(3, 1, 1);
        assert_eq!(kloosterman_sum(&chars(&[0], 2), 1, &t3).unwrap(), CycloNumber::from_integer(1, -1));
        let t5 = tower(5, 1, 1);
        assert_eq!(
            kloosterman_sum(&chars(&[1], 4), 0, &t5).unwrap(),
            gauss_sum(&chars(&[1], 4), &t5).unwrap()
        );
        assert!(katz_matrix(1, 0).is_err());
    }

    #[test]
    fn homogeneity_random() {
        let t = tower(5, 1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = ExponentMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        for _ in 0..20 {
            let chi = chars(&[rng.gen_range(0..4)], 4);
            let x: Vec<u64> = (0..2).map(|_| rng.gen_range(0..5)).collect();
            let tt = vec![rng.gen_range(1..5)];
            assert!(homogeneity_check(&t, &a, &chi, &x, &tt).unwrap().holds);
        }
        assert!(homogeneity_check(&t, &a, &chars(&[1], 4), &[2, 3], &[1]).unwrap().holds);
    }

    #[test]
    fn nonconfluent_examples() {
        let t = tower(5, 1, 1);
        let one = ExponentMatrix::from_rows(vec![vec![1]]).unwrap();
        for x in 1..5 {
            let r = nonconfluent_factorization(&t, &one, &chars(&[1], 4), &[x]).unwrap();
            assert!(r.holds);
            // Hyp(x) = χ^{-1}(x) g(χ)
            let inv = mult_char(&t, &chars(&[3], 4), &[x]).unwrap();
            assert_eq!(r.hyp, &inv * &r.gauss);
        }
        let id2 = ExponentMatrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        for x in [[1, 2], [3, 3], [0, 1], [0, 0]] {
            let r = nonconfluent_factorization(&t, &id2, &chars(&[1, 1], 4), &x).unwrap();
            assert!(r.holds, "{x:?}");
        }
        let zero = nonconfluent_factorization(&t, &id2, &chars(&[1, 1], 4), &[0, 0]).unwrap();
        assert!(zero.hyp.is_zero() && zero.reduced.is_zero());
        let confluent = ExponentMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        assert_eq!(nonconfluent_factorization(&t, &confluent, &chars(&[1], 4), &[1, 1]).unwrap_err(), Error::Confluent);
        assert!(matches!(
            nonconfluent_factorization(&t, &one, &chars(&[0], 4), &[1]),
            Err(Error::TrivialCharacter(_))
        ));
    }

    #[test]
    fn laurent_eval() {
        let t = tower(7, 1, 1);
        let f = LaurentPolynomial::new(vec![(2, vec![1, -1]), (3, vec![0, 2])]);
        // 2·3/5 + 3·25 in F_7
        let ext = t.ext();
        let expect = ext.add(ext.mul(6, ext.inv(5).unwrap()), ext.mul(3, 4));
        assert_eq!(f.eval(ext, &[3, 5]), expect);
        assert_eq!(additive_char(&t, 0).unwrap(), CycloNumber::one(7));
    }
}
