//! Scalar abstractions.
//!
//! Three families of scalars appear in this crate:
//!
//! * [`IntScalar`]: exact integers used by the lattice kernels (Smith normal
//!   form, Bareiss determinants, saturation). Implemented by `i64`, `i128`
//!   and `BigInt`.
//! * [`FieldScalar`]: exact rationals used as cyclotomic coefficients.
//!   Implemented by `Ratio<i64>`, `Ratio<i128>` and `BigRational`.
//! * [`RealScalar`]: approximate reals used for complex embeddings and root
//!   finding. Implemented by `f64` and the multiprecision [`MpFloat`].

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub use crate::mp::MpFloat;

/// Exact integer scalar.
pub trait IntScalar:
    Clone
    + Debug
    + Display
    + Eq
    + Ord
    + Hash
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every IntScalar")
    }

    fn to_bigint(&self) -> BigInt;
}

impl IntScalar for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl IntScalar for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl IntScalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Exact field scalar (a subfield of Q).
pub trait FieldScalar:
    Clone + Debug + Display + PartialEq + Num + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn to_big_rational(&self) -> BigRational;

    fn is_integral(&self) -> bool;
}

impl<T> FieldScalar for Ratio<T>
where
    T: IntScalar,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(<T as IntScalar>::from_i64(v))
    }

    fn to_big_rational(&self) -> BigRational {
        BigRational::new(self.numer().to_bigint(), self.denom().to_bigint())
    }

    fn is_integral(&self) -> bool {
        self.denom().is_one()
    }
}

/// Approximate real scalar carrying its own working precision (in bits).
pub trait RealScalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn precision_bits(&self) -> usize;

    fn from_f64(x: f64, bits: usize) -> Self;

    fn from_rational(r: &BigRational, bits: usize) -> Self;

    fn zero(bits: usize) -> Self {
        Self::from_f64(0.0, bits)
    }

    fn one(bits: usize) -> Self {
        Self::from_f64(1.0, bits)
    }

    fn pi(bits: usize) -> Self;

    /// `2^exp`, exact.
    fn pow2(exp: i32, bits: usize) -> Self;

    fn sqrt(&self) -> Self;

    fn ln(&self) -> Self;

    fn sin_cos(&self) -> (Self, Self);

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn is_zero(&self) -> bool;
}

impl RealScalar for f64 {
    fn precision_bits(&self) -> usize {
        53
    }

    fn from_f64(x: f64, _bits: usize) -> Self {
        x
    }

    fn from_rational(r: &BigRational, _bits: usize) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn pi(_bits: usize) -> Self {
        std::f64::consts::PI
    }

    fn pow2(exp: i32, _bits: usize) -> Self {
        2f64.powi(exp)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn ln(&self) -> Self {
        f64::ln(*self)
    }

    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Complex number over a [`RealScalar`].
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: RealScalar> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: usize) -> Self {
        Complex::new(R::zero(bits), R::zero(bits))
    }

    pub fn one(bits: usize) -> Self {
        Complex::new(R::one(bits), R::zero(bits))
    }

    pub fn from_real(re: R) -> Self {
        let bits = re.precision_bits();
        Complex::new(re, R::zero(bits))
    }

    /// `exp(2πi·k/m)`.
    pub fn root_of_unity(k: i64, m: u64, bits: usize) -> Self {
        let k = k.rem_euclid(m as i64);
        let angle = R::pi(bits) * R::from_f64((2 * k) as f64, bits) / R::from_f64(m as f64, bits);
        let (s, c) = angle.sin_cos();
        Complex::new(c, s)
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &R) -> Self {
        Complex::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: RealScalar> Add for Complex<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: RealScalar> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: RealScalar> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: RealScalar> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Complex::new(re, im)
    }
}

impl<R: RealScalar> Div for Complex<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.norm_sqr();
        let num = self * o.conj();
        Complex::new(num.re / d.clone(), num.im / d)
    }
}

/// Greatest common divisor for any [`IntScalar`], always nonnegative.
pub fn gcd<T: IntScalar>(a: &T, b: &T) -> T {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_roots_of_unity_f64() {
        let z: Complex<f64> = Complex::root_of_unity(1, 4, 53);
        assert!(z.re.abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let w: Complex<f64> = Complex::root_of_unity(-1, 3, 53);
        assert!((w.re + 0.5).abs() < 1e-15);
        assert!((w.im + 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let a = Complex::new(1.5f64, -2.0);
        let b = Complex::new(0.25f64, 3.0);
        let c = (a.clone() * b.clone()) / b;
        assert!((c.re - a.re).abs() < 1e-14 && (c.im - a.im).abs() < 1e-14);
    }

    #[test]
    fn ratio_field_scalars() {
        let r = <Ratio<i64> as FieldScalar>::from_i64(-3) / Ratio::from_integer(6);
        assert_eq!(r.to_big_rational(), BigRational::new((-1).into(), 2.into()));
        assert!(!r.is_integral());
        assert!(<BigRational as FieldScalar>::from_i64(4).is_integral());
    }
}
