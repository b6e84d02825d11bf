//! Multiprecision real numbers backed by `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_rational::BigRational;
use num_traits::Signed;

use crate::scalar::RealScalar;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// A binary floating point number with an explicit working precision.
///
/// Binary operations run at the larger precision of the two operands.
#[derive(Clone)]
pub struct MpFloat {
    value: BigFloat,
    bits: usize,
}

impl MpFloat {
    pub fn new(value: BigFloat, bits: usize) -> Self {
        MpFloat { value, bits }
    }

    pub fn inner(&self) -> &BigFloat {
        &self.value
    }

    /// Bits needed for `digits` correct decimal digits plus guard bits.
    pub fn bits_for_digits(digits: u32) -> usize {
        (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
    }

    pub fn to_decimal_string(&self) -> String {
        with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    fn parse_decimal(s: &str, bits: usize) -> BigFloat {
        with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc))
    }
}

impl fmt::Debug for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr for MpFloat {
            type Output = MpFloat;
            fn $method(self, rhs: MpFloat) -> MpFloat {
                let bits = self.bits.max(rhs.bits);
                MpFloat::new(self.value.$method(&rhs.value, bits, RM), bits)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat::new(self.value.neg(), self.bits)
    }
}

impl RealScalar for MpFloat {
    fn precision_bits(&self) -> usize {
        self.bits
    }

    fn from_f64(x: f64, bits: usize) -> Self {
        MpFloat::new(BigFloat::from_f64(x, bits), bits)
    }

    fn from_rational(r: &BigRational, bits: usize) -> Self {
        let num = MpFloat::parse_decimal(&r.numer().to_string(), bits);
        let den = MpFloat::parse_decimal(&r.denom().to_string(), bits);
        MpFloat::new(num.div(&den, bits, RM), bits)
    }

    fn pi(bits: usize) -> Self {
        MpFloat::new(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    fn pow2(exp: i32, bits: usize) -> Self {
        let mut v = BigFloat::from_u8(1, bits);
        // 1 is stored as 0.1b × 2^1
        v.set_exponent(exp + 1);
        MpFloat::new(v, bits)
    }

    fn sqrt(&self) -> Self {
        MpFloat::new(self.value.sqrt(self.bits, RM), self.bits)
    }

    fn ln(&self) -> Self {
        MpFloat::new(with_consts(|cc| self.value.ln(self.bits, RM, cc)), self.bits)
    }

    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = with_consts(|cc| {
            (
                self.value.sin(self.bits, RM, cc),
                self.value.cos(self.bits, RM, cc),
            )
        });
        (MpFloat::new(s, self.bits), MpFloat::new(c, self.bits))
    }

    fn abs(&self) -> Self {
        MpFloat::new(self.value.abs(), self.bits)
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        match self.value.as_raw_parts() {
            Some((words, _, sign, exp, _)) => {
                let top = *words.last().unwrap_or(&0) as f64;
                let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
                let mant = (top + next / 2f64.powi(64)) / 2f64.powi(64);
                let v = mant * 2f64.powi(exp);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => f64::NAN,
        }
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl MpFloat {
    /// Absolute value of the exact rational `r` minus `self`, as f64.
    pub fn distance_to(&self, r: &BigRational) -> f64 {
        let other = MpFloat::from_rational(&r.abs(), self.bits);
        (self.clone() - other).abs().to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_to_f64() {
        let p = MpFloat::pi(256);
        assert_eq!(p.to_f64(), std::f64::consts::PI);
        assert_eq!((-p).to_f64(), -std::f64::consts::PI);
    }

    #[test]
    fn pow2_is_exact() {
        assert_eq!(MpFloat::pow2(-10, 128).to_f64(), 2f64.powi(-10));
        assert_eq!(MpFloat::pow2(3, 128).to_f64(), 8.0);
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(1.into(), 3.into());
        let x = MpFloat::from_rational(&r, 256);
        let three = MpFloat::from_f64(3.0, 256);
        let err = (x * three - MpFloat::one(256)).abs();
        assert!(err < MpFloat::pow2(-240, 256));
    }

    #[test]
    fn sqrt_and_ln() {
        let two = MpFloat::from_f64(2.0, 300);
        let s = two.sqrt();
        let back = s.clone() * s;
        assert!((back - MpFloat::from_f64(2.0, 300)).abs() < MpFloat::pow2(-280, 300));
        assert!((MpFloat::from_f64(8.0, 128).ln().to_f64() - 8f64.ln()).abs() < 1e-15);
    }
}
