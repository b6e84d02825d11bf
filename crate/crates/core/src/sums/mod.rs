//! Exact GKZ hypergeometric sums
//!
//! ```text
//! Hyp(x; χ) = Σ_{t ∈ (k_m^*)^n} χ^{(m)}(t) ψ_m(Σ_j x_j t^{w_j})
//! ```
//!
//! Every term is a root of unity ζ_p^a ζ_{q−1}^b, so sums are accumulated as
//! integer counts in the group ring of μ_{p(q−1)} and reduced once at the end.

mod batch;
mod identities;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::characters::CharacterSpec;
use crate::arith::field::FiniteField;
use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::lattice::ExponentMatrix;
use crate::scalar::RealScalar;
use crate::CycloNumber;

pub use batch::{batch_all_characters, CharacterTable};
pub use identities::{
    homogeneity_check, katz_equivalence, katz_matrix, kloosterman_matrix, kloosterman_sum,
    mixed_vs_twisted_identity, nonconfluent_factorization, IdentityCheck, LaurentPolynomial, MixedTwistedReport,
    NonconfluentReport,
};

/// Largest number of torus points enumerated unless overridden.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Inputs of one hypergeometric sum over k_m.
#[derive(Clone, Copy, Debug)]
pub struct SumQuery<'a> {
    pub tower: &'a FieldTower,
    pub a: &'a ExponentMatrix,
    /// Character of (k^*)^n, lifted to k_m by the norm.
    pub chi: &'a CharacterSpec,
    /// Coefficients `x_j ∈ k_m`.
    pub x: &'a [u64],
    pub budget: u128,
}

impl<'a> SumQuery<'a> {
    pub fn new(tower: &'a FieldTower, a: &'a ExponentMatrix, chi: &'a CharacterSpec, x: &'a [u64]) -> Self {
        SumQuery { tower, a, chi, x, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(self, budget: u128) -> Self {
        SumQuery { budget, ..self }
    }

    fn validate(&self) -> Result<()> {
        let (n, big_n) = (self.a.n(), self.a.ncols());
        if self.chi.len() != n {
            return Err(Error::DimensionMismatch(format!("χ has {} components, n = {n}", self.chi.len())));
        }
        if self.x.len() != big_n {
            return Err(Error::DimensionMismatch(format!("x has {} entries, N = {big_n}", self.x.len())));
        }
        if self.chi.order() != self.tower.base().unit_order() {
            return Err(Error::InvalidInput(format!(
                "character order {} differs from q − 1 = {}",
                self.chi.order(),
                self.tower.base().unit_order()
            )));
        }
        if let Some(bad) = self.x.iter().find(|v| !self.tower.ext().contains(**v)) {
            return Err(Error::NotAnElement(*bad));
        }
        Ok(())
    }
}

/// Refuses a torus of `(q^m − 1)^n` points above the budget.
pub(crate) fn check_budget(ext: &FiniteField, n: usize, budget: u128) -> Result<u128> {
    let needed = (ext.unit_order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Integer combination of the roots of unity ζ_p^a ζ_{q−1}^b.
#[derive(Clone, Debug)]
pub(crate) struct GroupRing {
    p: u64,
    order: u64,
    counts: Vec<i64>,
}

impl GroupRing {
    pub(crate) fn new(p: u64, order: u64) -> Self {
        GroupRing { p, order, counts: vec![0; (p * order) as usize] }
    }

    pub(crate) fn conductor(&self) -> u64 {
        self.p * self.order
    }

    /// Adds `ζ_p^tr ζ_{q−1}^e`.
    #[inline]
    pub(crate) fn push(&mut self, tr: u64, e: u64) {
        let m = self.conductor();
        self.counts[((tr * self.order + e * self.p) % m) as usize] += 1;
    }

    pub(crate) fn merge(mut self, other: GroupRing) -> GroupRing {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    pub(crate) fn finish(&self) -> CycloNumber {
        CycloNumber::from_group_ring(self.conductor(), &self.counts)
    }
}

/// Logs `(a_1, …, a_n) ∈ [0, Q)^n` of torus point number `idx`, first coordinate most significant.
#[inline]
pub(crate) fn decode_point(mut idx: u128, q1: u64, out: &mut [u64]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % q1 as u128) as u64;
        idx /= q1 as u128;
    }
}

/// Evaluates `F(t, x)` by Zech logarithms; `None` when the value is 0.
pub(crate) struct LogEvaluator<'a> {
    ext: &'a FiniteField,
    xlogs: Vec<Option<u32>>,
    columns: &'a [Vec<i64>],
}

impl<'a> LogEvaluator<'a> {
    pub(crate) fn new(ext: &'a FiniteField, a: &'a ExponentMatrix, x: &[u64]) -> Self {
        LogEvaluator { ext, xlogs: x.iter().map(|v| ext.log_of(*v)).collect(), columns: a.columns() }
    }

    #[inline]
    pub(crate) fn value_log(&self, logs: &[u64]) -> Option<u32> {
        let q1 = self.ext.unit_order() as i64;
        let mut acc: Option<u32> = None;
        for (w, xl) in self.columns.iter().zip(&self.xlogs) {
            let Some(xl) = xl else { continue };
            let e: i64 = w.iter().zip(logs).map(|(wi, ai)| wi * *ai as i64).sum::<i64>() + *xl as i64;
            let l = e.rem_euclid(q1) as u32;
            acc = match acc {
                None => Some(l),
                Some(s) => {
                    let d = (s as i64 - l as i64).rem_euclid(q1) as u32;
                    self.ext.zech(d).map(|z| ((l as u64 + z as u64) % q1 as u64) as u32)
                }
            };
        }
        acc
    }

    #[inline]
    pub(crate) fn trace(&self, logs: &[u64]) -> u64 {
        self.value_log(logs).map_or(0, |l| self.ext.trace_of_log(l) as u64)
    }
}

/// Hyp(x; χ) by enumeration of the torus.
pub fn hyp_sum(query: &SumQuery<'_>) -> Result<CycloNumber> {
    query.validate()?;
    let tower = query.tower;
    let ext = tower.ext();
    let n = query.a.n();
    let total = check_budget(ext, n, query.budget)?;
    let q1 = ext.unit_order();
    let order = query.chi.order();
    let p = ext.characteristic();
    let eval = LogEvaluator::new(ext, query.a, query.x);
    // χ^{(m)}(g_m^a) = ζ^{c · norm_log(a)}
    let cd: Vec<u64> = query.chi.exponents().iter().map(|c| c * tower.norm_log(1) % order).collect();
    let chunk = q1 as u128;
    let chunks = total.div_ceil(chunk);
    let ring = (0..chunks as u64)
        .into_par_iter()
        .fold(
            || (GroupRing::new(p, order), vec![0u64; n]),
            |(mut ring, mut logs), c| {
                let start = c as u128 * chunk;
                let end = (start + chunk).min(total);
                for idx in start..end {
                    decode_point(idx, q1, &mut logs);
                    let e = cd.iter().zip(&logs).map(|(c, a)| c * (a % order)).sum::<u64>() % order;
                    ring.push(eval.trace(&logs), e);
                }
                (ring, logs)
            },
        )
        .map(|(r, _)| r)
        .reduce(|| GroupRing::new(p, order), GroupRing::merge);
    Ok(ring.finish())
}

/// g(χ', ψ) = Σ_{t ∈ k_m^*} χ'^{(m)}(t) ψ_m(t) for a one-variable character.
pub fn gauss_sum(chi: &CharacterSpec, tower: &FieldTower) -> Result<CycloNumber> {
    if chi.len() != 1 {
        return Err(Error::DimensionMismatch(format!("Gauss sums take one character, got {}", chi.len())));
    }
    let ext = tower.ext();
    let order = chi.order();
    let mut ring = GroupRing::new(ext.characteristic(), order);
    let c = chi.exponents()[0];
    for l in 0..ext.unit_order() {
        let e = c * tower.norm_log(l) % order;
        ring.push(ext.trace_of_log(l as u32) as u64, e);
    }
    Ok(ring.finish())
}

/// A sum as reported to users.
#[derive(Clone, Debug, Serialize)]
pub struct SumValue {
    pub value: CycloNumber,
    /// Image under ζ_m ↦ e^{2πi/m}.
    pub complex: [f64; 2],
    pub magnitude: f64,
}

impl SumValue {
    pub fn new(value: CycloNumber) -> Self {
        let (z, _) = value.embed_complex(30);
        let (re, im) = z.to_f64_pair();
        let magnitude = z.abs().to_f64();
        SumValue { value, complex: [re, im], magnitude }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    pub(crate) fn tower(p: u64, e: u32, m: u32) -> FieldTower {
        FieldTower::new(Arc::new(FiniteField::new(p, e, None).unwrap()), m).unwrap()
    }

    fn int(n: i64) -> CycloNumber {
        CycloNumber::from_integer(1, n)
    }

    fn hyp(t: &FieldTower, rows: Vec<Vec<i64>>, c: &[i64], x: &[u64]) -> CycloNumber {
        let a = ExponentMatrix::from_rows(rows).unwrap();
        let chi = CharacterSpec::new(c, t.base().unit_order());
        hyp_sum(&SumQuery::new(t, &a, &chi, x)).unwrap()
    }

    /// Term-by-term evaluation with field arithmetic and the character maps.
    fn naive(t: &FieldTower, rows: Vec<Vec<i64>>, c: &[i64], x: &[u64]) -> CycloNumber {
        use crate::arith::characters::{additive_char, mult_char};
        let a = ExponentMatrix::from_rows(rows).unwrap();
        let chi = CharacterSpec::new(c, t.base().unit_order());
        let ext = t.ext();
        let units: Vec<u64> = ext.units().collect();
        let n = a.n();
        let mut acc = CycloNumber::zero(1);
        for idx in 0..units.len().pow(n as u32) {
            let pt: Vec<u64> = (0..n).map(|i| units[idx / units.len().pow((n - 1 - i) as u32) % units.len()]).collect();
            let mut f = 0;
            for (w, xj) in a.columns().iter().zip(x) {
                let mono = w.iter().zip(&pt).fold(*xj, |acc, (e, ti)| ext.mul(acc, ext.pow(*ti, *e).unwrap()));
                f = ext.add(f, mono);
            }
            acc = &acc + &(&mult_char(t, &chi, &pt).unwrap() * &additive_char(t, f).unwrap());
        }
        acc
    }

    #[test]
    fn documented_values() {
        let t5 = tower(5, 1, 1);
        assert_eq!(hyp(&t5, vec![vec![1]], &[0], &[2]), int(-1));
        let t3 = tower(3, 1, 1);
        assert_eq!(hyp(&t3, vec![vec![1, -1]], &[0], &[1, 1]), int(-1));
        assert_eq!(hyp(&t5, vec![vec![1, 0, 1], vec![0, 1, 1]], &[0, 0], &[0, 0, 0]), int(16));
        assert!(hyp(&t5, vec![vec![1, 0, 1], vec![0, 1, 1]], &[1, 0], &[0, 0, 0]).is_zero());
    }

    #[test]
    fn matches_naive_enumeration() {
        for (p, e, m) in [(3, 1, 1), (5, 1, 1), (3, 1, 2), (2, 2, 1), (2, 1, 3), (7, 1, 1)] {
            let t = tower(p, e, m);
            let q1 = t.base().unit_order() as i64;
            let ext = t.ext();
            let xs: Vec<u64> = (0..3).map(|j| (j as u64 * 7 + 1) % ext.size()).collect();
            for rows in [vec![vec![1, -1]], vec![vec![1, 2]], vec![vec![2, 1, 0], vec![0, 1, 2]]] {
                let n = rows.len();
                let big_n = rows[0].len();
                for c0 in 0..q1.min(3) {
                    let c: Vec<i64> = (0..n as i64).map(|i| (c0 + i) % q1).collect();
                    let x = &xs[..big_n];
                    assert_eq!(hyp(&t, rows.clone(), &c, x), naive(&t, rows.clone(), &c, x), "p={p} e={e} m={m}");
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let t = tower(5, 1, 1);
        let a = ExponentMatrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let chi = CharacterSpec::trivial(2, 4);
        let r = hyp_sum(&SumQuery::new(&t, &a, &chi, &[1, 1]).with_budget(15));
        assert_eq!(r, Err(Error::BudgetExceeded { needed: 16, budget: 15 }));
    }

    #[test]
    fn input_validation() {
        let t = tower(5, 1, 1);
        let a = ExponentMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        let chi = CharacterSpec::trivial(1, 4);
        assert!(matches!(hyp_sum(&SumQuery::new(&t, &a, &chi, &[1])), Err(Error::DimensionMismatch(_))));
        assert_eq!(hyp_sum(&SumQuery::new(&t, &a, &chi, &[1, 9])), Err(Error::NotAnElement(9)));
        let bad = CharacterSpec::trivial(1, 6);
        assert!(hyp_sum(&SumQuery::new(&t, &a, &bad, &[1, 1])).is_err());
    }

    #[test]
    fn gauss_sum_values() {
        let t3 = tower(3, 1, 1);
        assert_eq!(gauss_sum(&CharacterSpec::trivial(1, 2), &t3).unwrap(), int(-1));
        let g = gauss_sum(&CharacterSpec::new(&[1], 2), &t3).unwrap();
        assert_eq!(g, &CycloNumber::zeta(3, 1) - &CycloNumber::zeta(3, 2));
        assert_eq!(&g * &g.conj(), int(3));
    }

    #[test]
    fn gauss_sums_have_magnitude_sqrt_q() {
        for (p, e, m) in [(3, 1, 1), (5, 1, 1), (7, 1, 1), (2, 2, 1), (3, 2, 1), (2, 3, 1), (3, 3, 1), (5, 1, 2)] {
            let t = tower(p, e, m);
            let order = t.base().unit_order();
            let qm = t.ext().size() as f64;
            for c in 1..order {
                let g = gauss_sum(&CharacterSpec::new(&[c as i64], order), &t).unwrap();
                for z in g.embeddings::<f64>(53) {
                    assert!((z.abs() - qm.sqrt()).abs() < 1e-9, "p={p} e={e} c={c}");
                }
                assert_eq!(&g * &g.conj(), CycloNumber::from_integer(1, qm as i64));
            }
        }
    }

    #[test]
    fn sum_value_json() {
        let v = SumValue::new(int(-1));
        assert_eq!(v.complex, [-1.0, 0.0]);
        assert_eq!(v.magnitude, 1.0);
        let s = serde_json::to_value(&v).unwrap();
        assert_eq!(s["value"]["coeffs"][0], "-1");
    }
}
