//! Frobenius eigenvalues at a point from power sums over extensions.
//!
//! With cohomology concentrated in one degree, `P_m = (−1)^n S_m` is the m-th
//! power sum of the eigenvalues, so Newton's identities recover the
//! characteristic polynomial and the root magnitudes give the weights.

mod nondegen;
mod roots;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::characters::CharacterSpec;
use crate::arith::field::FiniteField;
use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::lattice::{normalized_volume, ExponentMatrix};
use crate::mp::MpFloat;
use crate::resonance::nonresonant;
use crate::scalar::{Complex, RealScalar};
use crate::sums::{hyp_sum, SumQuery, DEFAULT_BUDGET};
use crate::weights::{e_polynomial, e_value, expected_spectrum, SpectrumPrediction, WeightPolynomial};
use crate::CycloNumber;

pub use nondegen::{nondegenerate_check, FaceVerdict, NondegeneracyReport, Witness};
pub use roots::{aberth, ApproxRoot};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 60;
/// Default tolerance on a weight before rounding.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// `S_m` and `P_m = (−1)^n S_m` for `m = 1..=M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSumSeries {
    pub n: usize,
    pub s: Vec<CycloNumber>,
    pub p: Vec<CycloNumber>,
}

impl PowerSumSeries {
    /// Builds the series from the raw sums `S_1, …, S_M`.
    pub fn from_sums(n: usize, s: Vec<CycloNumber>) -> Self {
        let p = s.iter().map(|v| if n % 2 == 0 { v.clone() } else { -v }).collect();
        PowerSumSeries { n, s, p }
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }
}

/// Total torus size `Σ_{m ≤ M} (q^m − 1)^n`, saturating.
fn enumeration_cost(q: u64, n: usize, depth: usize) -> u128 {
    (1..=depth as u32)
        .map(|m| {
            (q as u128)
                .checked_pow(m)
                .and_then(|qm| (qm - 1).checked_pow(n as u32))
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Hyp over `k_1, …, k_M` at a point of `k^N`.
pub fn power_sums(
    base: &Arc<FiniteField>,
    a: &ExponentMatrix,
    chi: &CharacterSpec,
    x: &[u64],
    depth: usize,
    budget: u128,
) -> Result<PowerSumSeries> {
    let needed = enumeration_cost(base.size(), a.n(), depth);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let s = (1..=depth as u32)
        .into_par_iter()
        .map(|m| {
            let tower = FieldTower::new(base.clone(), m)?;
            let lifted = x.iter().map(|v| tower.embed(*v)).collect::<Result<Vec<_>>>()?;
            hyp_sum(&SumQuery::new(&tower, a, chi, &lifted).with_budget(budget))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSumSeries::from_sums(a.n(), s))
}

/// Monic polynomial with cyclotomic coefficients, low to high.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<CycloNumber>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Common conductor of all coefficients.
    pub fn conductor(&self) -> u64 {
        self.coeffs.iter().fold(1u64, |l, c| num_integer::lcm(l, c.conductor()))
    }

    /// Coefficients lifted to the common conductor.
    pub fn aligned(&self) -> Vec<CycloNumber> {
        let m = self.conductor();
        self.coeffs.iter().map(|c| c.lift(m)).collect()
    }

    /// Complex embedding at `bits` of precision.
    pub fn embed<R: RealScalar>(&self, bits: usize) -> Vec<Complex<R>> {
        self.coeffs.iter().map(|c| c.embed::<R>(bits)).collect()
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<String>> =
            self.aligned().iter().map(|c| c.coeffs().iter().map(|x| x.to_string()).collect()).collect();
        let mut st = s.serialize_struct("CharPoly", 2)?;
        st.serialize_field("conductor", &self.conductor())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

fn rational(k: i64) -> BigRational {
    BigRational::from_integer(k.into())
}

/// Newton's identities on `P_1, …, P_D`; any further power sums must agree.
pub fn charpoly_from_power_sums(series: &PowerSumSeries, degree: usize) -> Result<CharPoly> {
    let p = &series.p;
    if p.len() < degree {
        return Err(Error::InsufficientPowerSums { needed: degree, got: p.len() });
    }
    let cond = p.iter().fold(1u64, |l, c| num_integer::lcm(l, c.conductor()));
    let p: Vec<CycloNumber> = p.iter().map(|c| c.lift(cond)).collect();
    // k e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} P_i
    let mut e = vec![CycloNumber::one(cond)];
    for k in 1..=degree {
        let mut acc = CycloNumber::zero(cond);
        for i in 1..=k {
            let term = &e[k - i] * &p[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&(BigRational::one() / rational(k as i64))));
    }
    // P_m = Σ_{i=1}^{D} (−1)^{i−1} e_i P_{m−i} for m > D
    for m in degree + 1..=p.len() {
        let mut acc = CycloNumber::zero(cond);
        for i in 1..=degree {
            let term = &e[i] * &p[m - i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        if acc != p[m - 1] {
            return Err(Error::InconsistentPowerSums { degree, index: m });
        }
    }
    // Π(T − α_i) = Σ_k (−1)^k e_k T^{D−k}
    let coeffs = (0..=degree)
        .map(|j| {
            let k = degree - j;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -&e[k]
            }
        })
        .collect();
    Ok(CharPoly { coeffs })
}

/// Numerical rank of the Hankel matrix `(P_{i+j+1})`, an exploratory estimate of the degree.
pub fn hankel_rank_estimate(series: &PowerSumSeries, digits: u32) -> usize {
    let bits = MpFloat::bits_for_digits(digits);
    let vals: Vec<Complex<MpFloat>> = series.p.iter().map(|c| c.embed::<MpFloat>(bits)).collect();
    let k = vals.len().div_ceil(2);
    let mut h: Vec<Vec<Complex<MpFloat>>> =
        (0..k).map(|i| (0..k).map(|j| vals.get(i + j).cloned().unwrap_or_else(|| Complex::zero(bits))).collect()).collect();
    let scale = vals.iter().map(|v| v.abs().to_f64()).fold(1.0f64, f64::max);
    let threshold = scale * 10f64.powi(-(digits as i32) / 2);
    let mut rank = 0;
    let mut col = 0;
    while rank < k && col < k {
        let pivot = (rank..k).max_by(|a, b| {
            h[*a][col].abs().partial_cmp(&h[*b][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(pr) = pivot else { break };
        if h[pr][col].abs().to_f64() <= threshold {
            col += 1;
            continue;
        }
        h.swap(rank, pr);
        for r in rank + 1..k {
            let f = h[r][col].clone() / h[rank][col].clone();
            for c in col..k {
                let v = h[rank][c].clone() * f.clone();
                h[r][c] = h[r][c].clone() - v;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// One eigenvalue with its weight.
#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// Decimal rendering of `|α|` at working precision.
    pub abs_decimal: String,
    /// Inclusion radius of the root.
    pub error: f64,
    /// `2·log_q|α|` before rounding.
    pub weight_raw: f64,
    pub weight: i64,
}

/// Observed weights of a characteristic polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ObservedSpectrum {
    pub roots: Vec<RootReport>,
    pub weights: BTreeMap<i64, u64>,
    pub digits: u32,
}

fn spectrum_at(poly: &CharPoly, q: u64, n: usize, digits: u32, tol: f64) -> Result<ObservedSpectrum> {
    let bits = MpFloat::bits_for_digits(digits);
    let roots = aberth::<MpFloat>(&poly.embed::<MpFloat>(bits), bits)?;
    let ln_q = MpFloat::from_f64(q as f64, bits).ln();
    let mut reports = Vec::new();
    let mut weights = BTreeMap::new();
    for r in roots {
        let abs = r.z.abs();
        if abs.is_zero() {
            return Err(Error::ZeroEigenvalue);
        }
        let raw = (MpFloat::from_f64(2.0, bits) * abs.ln() / ln_q.clone()).to_f64();
        let v = raw.round();
        if (raw - v).abs() > tol || v < 0.0 || v > n as f64 {
            return Err(Error::WeightNotIntegral { value: raw, tol, max: n as i64 });
        }
        *weights.entry(v as i64).or_insert(0) += 1;
        let (re, im) = r.z.to_f64_pair();
        reports.push(RootReport {
            re,
            im,
            abs: abs.to_f64(),
            abs_decimal: abs.to_decimal_string(),
            error: r.radius,
            weight_raw: raw,
            weight: v as i64,
        });
    }
    Ok(ObservedSpectrum { roots: reports, weights, digits })
}

/// Weights `v = 2·log_q|α|` of the roots, retrying once at doubled precision.
pub fn weight_spectrum(poly: &CharPoly, q: u64, n: usize, digits: u32, tol: f64) -> Result<ObservedSpectrum> {
    match spectrum_at(poly, q, n, digits, tol) {
        Err(Error::WeightNotIntegral { .. }) => spectrum_at(poly, q, n, digits * 2, tol),
        other => other,
    }
}

/// Knobs for [`verify_point`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Power-sum depth; `None` means `D + 2`, lowered to `D + 1` if the budget requires.
    pub depth: Option<usize>,
    pub digits: u32,
    pub tol: f64,
    pub m_max: u32,
    pub budget: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { depth: None, digits: DEFAULT_DIGITS, tol: DEFAULT_TOLERANCE, m_max: 3, budget: DEFAULT_BUDGET }
    }
}

/// Verdict of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    NotApplicable,
    Skipped,
}

impl Check {
    fn from_bool(b: bool) -> Self {
        if b {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn failed(self) -> bool {
        self == Check::Fail
    }
}

/// The four predictions tested at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    /// Degree `n!vol(Δ)` reproduces every extra power sum.
    pub rank: Check,
    /// Observed weights equal those read off E(Δ,χ).
    pub spectrum: Check,
    /// All weights equal n when χ is non-resonant and the columns generate Z^n.
    pub purity: Check,
    /// Number of weight-n eigenvalues equals |e(Δ,χ)|.
    pub top_count: Check,
}

/// Overall verdict of [`verify_point`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "failed")]
    Failed,
    #[serde(rename = "hypotheses unverified")]
    HypothesesUnverified,
}

/// Everything computed by [`verify_point`].
#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub degree: u64,
    pub depth: usize,
    /// True if the depth was lowered below `D + 2` to fit the budget.
    pub depth_reduced: bool,
    pub power_sums: Vec<CycloNumber>,
    pub charpoly: Option<CharPoly>,
    pub roots: Vec<RootReport>,
    pub weights: Option<BTreeMap<i64, u64>>,
    pub expected: SpectrumPrediction,
    #[serde(rename = "E")]
    pub e_polynomial: WeightPolynomial,
    pub e: i64,
    pub nonresonant: bool,
    pub sign_consistent: bool,
    pub nondegeneracy: NondegeneracyReport,
    pub checks: Checks,
    pub status: Status,
    pub notes: Vec<String>,
}

/// Compares the observed Frobenius spectrum at `x ∈ k^N` with the predictions.
pub fn verify_point(
    base: &Arc<FiniteField>,
    a: &ExponentMatrix,
    chi: &CharacterSpec,
    x: &[u64],
    opts: &VerifyOptions,
) -> Result<WeightReport> {
    let (n, big_n) = (a.n(), a.ncols());
    let q = base.size();
    let degree = normalized_volume(&a.newton_polytope());
    let d = degree as usize;
    let mut notes = Vec::new();

    let depth = match opts.depth {
        Some(m) => m,
        None => {
            let fits = |m: usize| enumeration_cost(q, n, m) <= opts.budget;
            if fits(d + 2) {
                d + 2
            } else if fits(d + 1) {
                notes.push(format!("power-sum depth lowered to D + 1 = {} to fit the budget", d + 1));
                d + 1
            } else {
                d
            }
        }
    };
    let depth_reduced = depth < d + 2;
    let series = power_sums(base, a, chi, x, depth, opts.budget)?;
    let nondegeneracy = nondegenerate_check(base, a, x, opts.m_max, opts.budget)?;
    let e_poly = e_polynomial(a, chi)?;
    let e = e_value(a, chi);
    let expected = expected_spectrum(&e_poly, n, big_n, degree)?;
    let is_nonresonant = nonresonant(chi, &a.cone()).nonresonant;
    if !expected.sign_consistent {
        notes.push("coefficients of E do not all have sign (−1)^N".into());
    }

    let charpoly = match charpoly_from_power_sums(&series, d) {
        Ok(c) => Some(c),
        Err(Error::InconsistentPowerSums { index, .. }) => {
            notes.push(format!("power sum S_{index} disagrees with degree {d}"));
            None
        }
        Err(err) => return Err(err),
    };
    let rank = match (&charpoly, depth > d) {
        (None, _) => Check::Fail,
        (Some(_), true) => Check::Pass,
        (Some(_), false) => Check::Skipped,
    };

    let mut checks = Checks { rank, spectrum: Check::Skipped, purity: Check::Skipped, top_count: Check::Skipped };
    let mut roots = Vec::new();
    let mut weights = None;
    let hypotheses = nondegeneracy.nondegenerate && !rank.failed();
    if !nondegeneracy.nondegenerate {
        notes.push("point is degenerate; no spectrum is asserted".into());
    }
    if let (true, Some(poly)) = (hypotheses, &charpoly) {
        let observed = weight_spectrum(poly, q, n, opts.digits, opts.tol)?;
        checks.spectrum = Check::from_bool(observed.weights == expected.weights);
        checks.purity = if is_nonresonant && a.columns_generate_lattice() {
            Check::from_bool(observed.weights.keys().all(|v| *v == n as i64))
        } else {
            Check::NotApplicable
        };
        let top = observed.weights.get(&(n as i64)).copied().unwrap_or(0);
        checks.top_count = Check::from_bool(top == e.unsigned_abs());
        roots = observed.roots;
        weights = Some(observed.weights);
    }
    let all = [checks.rank, checks.spectrum, checks.purity, checks.top_count];
    let status = if !hypotheses {
        Status::HypothesesUnverified
    } else if all.iter().any(|c| c.failed()) {
        Status::Failed
    } else {
        Status::Verified
    };
    Ok(WeightReport {
        degree,
        depth,
        depth_reduced,
        power_sums: series.s,
        charpoly,
        roots,
        weights,
        sign_consistent: expected.sign_consistent,
        expected,
        e_polynomial: e_poly,
        e,
        nonresonant: is_nonresonant,
        nondegeneracy,
        checks,
        status,
        notes,
    })
}
