use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer polynomial in one variable `T`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct WeightPolynomial {
    coeffs: Vec<i64>,
}

impl WeightPolynomial {
    pub fn zero() -> Self {
        WeightPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c·T^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// Coefficients in increasing degree.
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        WeightPolynomial { coeffs }
    }

    /// `T² − 1`.
    pub fn t2_minus_one() -> Self {
        Self::from_coeffs(vec![-1, 0, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Keeps the terms of degree at most `d`.
    pub fn truncate(&self, d: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(d + 1).copied().collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_coeffs(coeffs)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn only_even_powers(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (k, *c))
    }
}

impl Add for &WeightPolynomial {
    type Output = WeightPolynomial;
    fn add(self, o: &WeightPolynomial) -> WeightPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        WeightPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &WeightPolynomial {
    type Output = WeightPolynomial;
    fn sub(self, o: &WeightPolynomial) -> WeightPolynomial {
        self + &(-o)
    }
}

impl Neg for &WeightPolynomial {
    type Output = WeightPolynomial;
    fn neg(self) -> WeightPolynomial {
        self.scale(-1)
    }
}

impl Mul for &WeightPolynomial {
    type Output = WeightPolynomial;
    fn mul(self, o: &WeightPolynomial) -> WeightPolynomial {
        if self.is_zero() || o.is_zero() {
            return WeightPolynomial::zero();
        }
        let mut out = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in o.terms() {
                out[i + j] += a * b;
            }
        }
        WeightPolynomial::from_coeffs(out)
    }
}

impl fmt::Debug for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeightPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let mag = c.abs();
            let body = match (k, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "T".into(),
                (1, m) => format!("{m}T"),
                (k, 1) => format!("T^{k}"),
                (k, m) => format!("{m}T^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Nonzero coefficients keyed by exponent, as strings.
pub(crate) struct CoeffMap<'a>(pub &'a WeightPolynomial);

impl Serialize for CoeffMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(usize, i64)> = self.0.terms().collect();
        let mut m = s.serialize_map(Some(terms.len()))?;
        for (k, c) in terms {
            m.serialize_entry(&k.to_string(), &c)?;
        }
        m.end()
    }
}

impl Serialize for WeightPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("coeffs", &CoeffMap(self))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for WeightPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: BTreeMap<String, i64>,
        }
        let raw = Raw::deserialize(d)?;
        let mut coeffs = Vec::new();
        for (k, c) in raw.coeffs {
            let k: usize = k.parse().map_err(D::Error::custom)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] += c;
        }
        Ok(WeightPolynomial::from_coeffs(coeffs))
    }
}
