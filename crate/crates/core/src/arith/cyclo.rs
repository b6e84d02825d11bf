//! Exact arithmetic in cyclotomic fields Q(ζ_m).
//!
//! An element is stored by its coefficients in the power basis
//! `1, ζ, …, ζ^{φ(m)-1}`, reduced modulo the m-th cyclotomic polynomial.
//! The reduced form is unique for a fixed conductor; values with different
//! conductors are compared and combined in the compositum `lcm(m, m')`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::mp::MpFloat;
use crate::scalar::{Complex, FieldScalar, RealScalar};

/// Reduction data for one conductor.
#[derive(Debug)]
pub struct CycloTables {
    pub conductor: u64,
    /// Φ_m, low to high, monic.
    pub phi: Vec<i64>,
    /// `powers[k]` = ζ^k written in the power basis, for `0 ≤ k < m`.
    pub powers: Vec<Vec<i64>>,
}

impl CycloTables {
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
}

fn cyclotomic_polynomial(m: u64, cache: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&m) {
        return p.clone();
    }
    // x^m - 1
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclotomic_polynomial(d, cache);
            num = exact_div(&num, &div);
        }
    }
    cache.insert(m, num.clone());
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "cyclotomic division must be exact");
    quot
}

/// Shared reduction tables for conductor `m`.
pub fn tables(m: u64) -> Arc<CycloTables> {
    static CACHE: OnceLock<Mutex<(HashMap<u64, Arc<CycloTables>>, HashMap<u64, Vec<i64>>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((HashMap::new(), HashMap::new())));
    let mut guard = cache.lock().expect("cyclotomic table cache poisoned");
    if let Some(t) = guard.0.get(&m) {
        return t.clone();
    }
    let phi = cyclotomic_polynomial(m, &mut guard.1);
    let deg = phi.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; deg];
    if deg > 0 {
        cur[0] = 1;
    }
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce by the monic Φ_m
        let top = if deg > 0 { cur[deg - 1] } else { 0 };
        let mut next = vec![0i64; deg];
        for i in (1..deg).rev() {
            next[i] = cur[i - 1];
        }
        for i in 0..deg {
            next[i] -= top * phi[i];
        }
        cur = next;
    }
    let t = Arc::new(CycloTables { conductor: m, phi, powers });
    guard.0.insert(m, t.clone());
    t
}

/// Element of Q(ζ_m) with coefficients in `T`.
#[derive(Clone, Debug)]
pub struct Cyclo<T> {
    conductor: u64,
    coeffs: Vec<T>,
}

impl<T: FieldScalar> Cyclo<T> {
    pub fn zero(m: u64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let deg = tables(m).degree();
        Cyclo { conductor: m, coeffs: vec![T::zero(); deg] }
    }

    pub fn from_integer(m: u64, n: i64) -> Self {
        let mut z = Self::zero(m);
        if n != 0 {
            z.coeffs[0] = T::from_i64(n);
        }
        z
    }

    pub fn one(m: u64) -> Self {
        Self::from_integer(m, 1)
    }

    /// ζ_m^k in reduced form.
    pub fn zeta(m: u64, k: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_group_ring(m, &counts)
    }

    /// Reduces `Σ_k counts[k] ζ_m^k`.
    pub fn from_group_ring(m: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, m, "group ring vector length must equal the conductor");
        let t = tables(m);
        let mut acc = vec![0i64; t.degree()];
        for (k, c) in counts.iter().enumerate() {
            if *c != 0 {
                for (a, r) in acc.iter_mut().zip(&t.powers[k]) {
                    *a += c * r;
                }
            }
        }
        Cyclo { conductor: m, coeffs: acc.into_iter().map(T::from_i64).collect() }
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<T>) -> Self {
        let deg = tables(m).degree();
        assert_eq!(coeffs.len(), deg, "coefficient vector must have length φ(m)");
        Cyclo { conductor: m, coeffs }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<T> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(T::zero))
        } else {
            None
        }
    }

    /// Rewrites the element with conductor `l`, a multiple of the current one.
    pub fn lift(&self, l: u64) -> Self {
        if l == self.conductor {
            return self.clone();
        }
        assert_eq!(l % self.conductor, 0, "target conductor must be a multiple");
        let step = (l / self.conductor) as usize;
        let t = tables(l);
        let mut out = vec![T::zero(); t.degree()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&t.powers[i * step]) {
                if *r != 0 {
                    *o = o.clone() + c.clone() * T::from_i64(*r);
                }
            }
        }
        Cyclo { conductor: l, coeffs: out }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let l = self.conductor.lcm(&other.conductor);
        (self.lift(l), other.lift(l))
    }

    pub fn scale(&self, s: &T) -> Self {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Galois automorphism ζ ↦ ζ^a, `gcd(a, m) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let m = self.conductor;
        assert_eq!((a.rem_euclid(m as i64) as u64).gcd(&m), 1, "a must be a unit mod m");
        let t = tables(m);
        let mut out = vec![T::zero(); t.degree()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (a * i as i64).rem_euclid(m as i64) as usize;
            for (o, r) in out.iter_mut().zip(&t.powers[k]) {
                if *r != 0 {
                    *o = o.clone() + c.clone() * T::from_i64(*r);
                }
            }
        }
        Cyclo { conductor: m, coeffs: out }
    }

    /// Complex conjugate, the automorphism ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Image under the embedding ζ_m ↦ exp(2πi/m) at `bits` of working precision.
    pub fn embed<R: RealScalar>(&self, bits: usize) -> Complex<R> {
        let mut acc = Complex::<R>::zero(bits);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = R::from_rational(&c.to_big_rational(), bits);
            acc = acc + Complex::root_of_unity(i as i64, self.conductor, bits).scale(&r);
        }
        acc
    }

    /// All φ(m) complex embeddings.
    pub fn embeddings<R: RealScalar>(&self, bits: usize) -> Vec<Complex<R>> {
        let m = self.conductor as i64;
        (1..=m.max(1))
            .filter(|a| (*a as u64).gcd(&(m as u64)) == 1)
            .map(|a| self.galois(a).embed(bits))
            .collect()
    }

    /// Embedding with at least `digits` correct decimal digits, plus an
    /// upper bound on the absolute error.
    pub fn embed_complex(&self, digits: u32) -> (Complex<MpFloat>, f64) {
        let bits = MpFloat::bits_for_digits(digits.max(15));
        let z = self.embed::<MpFloat>(bits);
        let l1: f64 = self
            .coeffs
            .iter()
            .map(|c| RealScalar::abs(&MpFloat::from_rational(&c.to_big_rational(), 64)).to_f64())
            .sum();
        // each term carries a few ulps from sin/cos, the product and the sum
        let bound = (l1 + 1.0) * (self.coeffs.len() as f64 + 4.0) * 2f64.powi(-(bits as i32 - 4));
        (z, bound)
    }
}

impl<T: FieldScalar> PartialEq for Cyclo<T> {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.align(other);
        a.coeffs == b.coeffs
    }
}

impl<T: FieldScalar> Eq for Cyclo<T> {}

impl<'a, T: FieldScalar> Add<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn add(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        let (a, b) = self.align(rhs);
        Cyclo {
            conductor: a.conductor,
            coeffs: a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a, T: FieldScalar> Sub<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn sub(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        self + &(-rhs)
    }
}

impl<T: FieldScalar> Neg for &Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<'a, T: FieldScalar> Mul<&'a Cyclo<T>> for &'a Cyclo<T> {
    type Output = Cyclo<T>;
    fn mul(self, rhs: &Cyclo<T>) -> Cyclo<T> {
        let (a, b) = self.align(rhs);
        let m = a.conductor as usize;
        let t = tables(a.conductor);
        // product in Q[C_m] first, then one reduction per occupied power
        let mut ring: Vec<Option<T>> = vec![None; m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % m;
                let v = x.clone() * y.clone();
                ring[k] = Some(match ring[k].take() {
                    Some(acc) => acc + v,
                    None => v,
                });
            }
        }
        let mut out = vec![T::zero(); t.degree()];
        for (k, c) in ring.into_iter().enumerate() {
            if let Some(c) = c {
                for (o, r) in out.iter_mut().zip(&t.powers[k]) {
                    if *r != 0 {
                        *o = o.clone() + c.clone() * T::from_i64(*r);
                    }
                }
            }
        }
        Cyclo { conductor: a.conductor, coeffs: out }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl<T: FieldScalar> $tr for Cyclo<T> {
            type Output = Cyclo<T>;
            fn $method(self, rhs: Cyclo<T>) -> Cyclo<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<T: FieldScalar> Neg for Cyclo<T> {
    type Output = Cyclo<T>;
    fn neg(self) -> Cyclo<T> {
        -&self
    }
}

impl<T: FieldScalar> fmt::Display for Cyclo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.conductor)?,
                _ => write!(f, "({c})·ζ{}^{i}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized as `{"conductor": m, "coeffs": ["1", "-3/2", …]}`.
impl<T: FieldScalar> Serialize for Cyclo<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cyclo", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    type C = Cyclo<BigRational>;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(tables(1).phi, vec![-1, 1]);
        assert_eq!(tables(4).phi, vec![1, 0, 1]);
        assert_eq!(tables(6).phi, vec![1, -1, 1]);
        assert_eq!(tables(12).phi, vec![1, 0, -1, 0, 1]);
        assert_eq!(tables(15).degree(), 8);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = C::zeta(4, 1);
        assert_eq!(&z * &z, C::from_integer(4, -1));
        assert_eq!(C::zeta(4, 2), C::from_integer(4, -1));
    }

    #[test]
    fn cyclotomic_relation() {
        let s = &(&C::one(3) + &C::zeta(3, 1)) + &C::zeta(3, 2);
        assert!(s.is_zero());
    }

    #[test]
    fn mixed_conductors_meet_in_compositum() {
        let a = C::zeta(3, 1);
        let b = C::zeta(4, 1);
        let c = &a * &b;
        assert_eq!(c.conductor(), 12);
        assert_eq!(c, C::zeta(12, 7));
        // -1 written with two conductors
        assert_eq!(C::from_integer(2, -1), C::zeta(6, 3));
    }

    #[test]
    fn embedding_magnitudes() {
        let x = &C::zeta(8, 1) + &C::zeta(8, 7);
        let z: Complex<f64> = x.embed(53);
        assert!((z.abs() - 2f64.sqrt()).abs() < 1e-14);

        let w: Complex<f64> = C::zeta(3, 1).embed(53);
        assert!((w.re + 0.5).abs() < 1e-15 && (w.im - 0.8660254037844386).abs() < 1e-15);

        let d = &C::zeta(3, 1) - &C::zeta(3, 2);
        let z: Complex<f64> = d.embed(53);
        assert!(z.re.abs() < 1e-15 && (z.im - 3f64.sqrt()).abs() < 1e-15);
        assert!(C::zero(7).embed::<f64>(53).is_zero());
    }

    #[test]
    fn embed_complex_precision_doubling() {
        let x = &(&C::zeta(20, 3) + &C::zeta(20, 7).scale(&BigRational::new(5.into(), 3.into())))
            - &C::from_integer(20, 2);
        let (a, bound) = x.embed_complex(30);
        let (b, _) = x.embed_complex(60);
        let diff = (a - b).abs();
        assert!(diff < MpFloat::from_f64(1e-30, 256));
        assert!(bound < 1e-30);
    }

    #[test]
    fn generic_over_small_rationals() {
        let a: Cyclo<Rational64> = Cyclo::zeta(5, 2);
        let b = a.pow(5);
        assert_eq!(b, Cyclo::one(5));
        let sum = (0..5).fold(Cyclo::<Rational64>::zero(5), |acc, k| &acc + &Cyclo::zeta(5, k));
        assert!(sum.is_zero());
    }

    #[test]
    fn galois_and_conjugation() {
        let x = &C::zeta(7, 1) + &C::from_integer(7, 2);
        let y = x.conj();
        let prod = &x * &y;
        // |ζ + 2|^2 is real
        let z: Complex<f64> = prod.embed(53);
        assert!(z.im.abs() < 1e-14);
        assert_eq!(x.embeddings::<f64>(53).len(), 6);
    }

    #[test]
    fn serializes_coefficients_as_strings() {
        let x = C::zeta(4, 1).scale(&BigRational::new(3.into(), 2.into()));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"conductor":4,"coeffs":["0","3/2"]}"#);
    }
}
