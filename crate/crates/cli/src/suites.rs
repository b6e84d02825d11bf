//! Randomized and exhaustive identity suites.

use std::sync::Arc;

use gkz_core::arith::{CharacterSpec, FieldTower, FiniteField};
use gkz_core::lattice::ExponentMatrix;
use gkz_core::sums::{
    homogeneity_check, katz_equivalence, mixed_vs_twisted_identity, nonconfluent_factorization, LaurentPolynomial,
};
use gkz_core::Result;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Pass count of one suite, with the first failing case if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new() -> Self {
        SuiteResult { cases: 0, passed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(case());
        }
    }

    pub fn holds(&self) -> bool {
        self.cases > 0 && self.passed == self.cases
    }
}

/// All four suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub mixed_vs_twisted: SuiteResult,
    pub homogeneity: SuiteResult,
    pub katz: SuiteResult,
    pub nonconfluent: SuiteResult,
}

impl SuiteReport {
    pub fn holds(&self) -> bool {
        self.mixed_vs_twisted.holds() && self.homogeneity.holds() && self.katz.holds() && self.nonconfluent.holds()
    }
}

fn tower(p: u64, e: u32) -> Result<FieldTower> {
    FieldTower::new(Arc::new(FiniteField::new(p, e, None)?), 1)
}

fn random_laurent(rng: &mut ChaCha8Rng, p: u64, n: usize) -> LaurentPolynomial {
    let terms = rng.gen_range(1..=2);
    LaurentPolynomial::new(
        (0..terms).map(|_| (rng.gen_range(1..p), (0..n).map(|_| rng.gen_range(-2..=2)).collect())).collect(),
    )
}

/// `S2 = ∏ g(χ_i^{-1}) S1` on random Laurent data with nontrivial χ_i, p ≤ 7.
pub fn mixed_vs_twisted_suite(seed: u64, instances: usize, budget: u128) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new();
    for _ in 0..instances {
        let p = *[3u64, 5, 7].choose(&mut rng).expect("nonempty");
        let t = tower(p, 1)?;
        let n = rng.gen_range(1..=2);
        let r = rng.gen_range(1..=2);
        let f = random_laurent(&mut rng, p, n);
        let fs: Vec<LaurentPolynomial> = (0..r).map(|_| random_laurent(&mut rng, p, n)).collect();
        let c: Vec<i64> = (0..r).map(|_| rng.gen_range(1..p as i64 - 1)).collect();
        let chis = CharacterSpec::new(&c, p - 1);
        let rep = mixed_vs_twisted_identity(&t, n, &f, &fs, &chis, budget)?;
        out.record(rep.holds, || format!("p={p} n={n} f={f:?} fs={fs:?} chi={c:?}"));
    }
    Ok(out)
}

/// `Hyp(t·x; χ) = χ^{-1}(t) Hyp(x; χ)` on random `(t, x)`.
pub fn homogeneity_suite(seed: u64, instances: usize) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = [vec![vec![1, -1]], vec![vec![1, 2]], vec![vec![1, 0, 1], vec![0, 1, 1]], vec![vec![2, 1, 0], vec![0, 1, 2]]];
    let mut out = SuiteResult::new();
    for _ in 0..instances {
        let (p, e) = *[(3u64, 1u32), (5, 1), (7, 1), (2, 2)].choose(&mut rng).expect("nonempty");
        let t = tower(p, e)?;
        let q = t.ext().size();
        let a = ExponentMatrix::from_rows(mats.choose(&mut rng).expect("nonempty").clone())?;
        let c: Vec<i64> = (0..a.n()).map(|_| rng.gen_range(0..q as i64 - 1)).collect();
        let chi = CharacterSpec::new(&c, q - 1);
        let x: Vec<u64> = (0..a.ncols()).map(|_| rng.gen_range(0..q)).collect();
        let s: Vec<u64> = (0..a.n()).map(|_| rng.gen_range(1..q)).collect();
        let rep = homogeneity_check(&t, &a, &chi, &x, &s)?;
        out.record(rep.holds, || format!("q={q} A={:?} chi={c:?} x={x:?} t={s:?}", a.rows()));
    }
    Ok(out)
}

/// Katz sums against their hypergeometric form, every χ and x for q ≤ 5.
pub fn katz_suite() -> Result<SuiteResult> {
    let mut out = SuiteResult::new();
    for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
        let t = tower(p, e)?;
        let q = t.ext().size();
        let order = q - 1;
        for (n, m) in [(1usize, 1usize), (2, 1), (1, 2)] {
            let d = n + m - 1;
            for idx in 0..order.pow(d as u32) {
                let c: Vec<i64> = (0..d).map(|i| (idx / order.pow(i as u32) % order) as i64).collect();
                let chis = CharacterSpec::new(&c, order);
                for x in 0..q {
                    let rep = katz_equivalence(&t, n, m, &chis, x)?;
                    out.record(rep.holds, || format!("q={q} (n,m)=({n},{m}) chi={c:?} x={x}"));
                }
            }
        }
    }
    Ok(out)
}

/// The Gauss-sum factorization for A = I_1, I_2 and [[1,0,1],[0,1,0]].
pub fn nonconfluent_suite(seed: u64, instances: usize) -> Result<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats = [vec![vec![1]], vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0, 1], vec![0, 1, 0]]];
    let mut out = SuiteResult::new();
    while out.cases < instances {
        let p = *[3u64, 5, 7].choose(&mut rng).expect("nonempty");
        let t = tower(p, 1)?;
        let a = ExponentMatrix::from_rows(mats.choose(&mut rng).expect("nonempty").clone())?;
        let c: Vec<i64> = (0..a.n()).map(|_| rng.gen_range(0..p as i64 - 1)).collect();
        let chi = CharacterSpec::new(&c, p - 1);
        let x: Vec<u64> = (0..a.ncols()).map(|_| rng.gen_range(0..p)).collect();
        match nonconfluent_factorization(&t, &a, &chi, &x) {
            Ok(rep) => out.record(rep.holds, || format!("p={p} A={:?} chi={c:?} x={x:?}", a.rows())),
            Err(gkz_core::Error::TrivialCharacter(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn run_suites(seed: u64, budget: u128) -> Result<SuiteReport> {
    Ok(SuiteReport {
        mixed_vs_twisted: mixed_vs_twisted_suite(seed, 20, budget)?,
        homogeneity: homogeneity_suite(seed.wrapping_add(1), 100)?,
        katz: katz_suite()?,
        nonconfluent: nonconfluent_suite(seed.wrapping_add(2), 30)?,
    })
}
