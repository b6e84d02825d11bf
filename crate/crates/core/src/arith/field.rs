//! Prime-power finite fields with full discrete-log tables.
//!
//! Elements are encoded as integers `c_0 + c_1 p + … + c_{e-1} p^{e-1}` where
//! `c_0 + c_1 x + …` is the residue modulo the defining polynomial. Zero is
//! encoded as `0` and one as `1`; for `e = 1` the encoding is the residue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial arithmetic over F_p, coefficients low to high.
mod poly {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = super::inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let f = r[top] * lead_inv % p;
            if f != 0 {
                for i in 0..=dm {
                    let idx = top - dm + i;
                    r[idx] = (r[idx] + p - f * m[i] % p) % p;
                }
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn encode(a: &[u64], p: u64) -> u64 {
        a.iter().rev().fold(0, |acc, c| acc * p + c)
    }

    pub fn decode(mut x: u64, p: u64, len: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(x % p);
            x /= p;
        }
        out
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod_u64(a % p, p - 2, p)
}

/// Inverse of `a` modulo `n` (any modulus), if it exists.
pub(crate) fn inv_mod_general(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as u64)
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = poly::decode(low, p, d);
            cand.push(1);
            if poly::rem(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Serializable description of a field: `{"p":5,"e":1,"modulus":[…],"generator":2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
    pub generator: u64,
}

/// The field F_q, q = p^e, with a fixed primitive element `g`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    trace: Vec<u32>,
}

impl FiniteField {
    /// Builds F_{p^e}. Without a modulus, the least monic irreducible
    /// polynomial (ordered by encoding of its lower coefficients) is used.
    /// The generator is the least primitive element in encoding order.
    pub fn new(p: u64, e: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidDegree(e));
        }
        let q = p
            .checked_pow(e)
            .filter(|q| *q <= MAX_FIELD_SIZE)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(e)))?;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.into_iter().map(|c| c % p).collect();
                if m.len() != e as usize + 1 || m[e as usize] != 1 || !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus { degree: e });
                }
                m
            }
            None => (0..q)
                .map(|low| {
                    let mut m = poly::decode(low, p, e as usize);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("irreducible polynomials exist in every degree"),
        };

        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&cand| {
                let poly = poly::decode(cand, p, e as usize);
                factors
                    .iter()
                    .all(|r| poly::pow_mod(&poly, order / r, &modulus, p) != vec![1])
            })
            .expect("the multiplicative group is cyclic");
        Self::with_generator(p, e, q, modulus, generator)
    }

    fn with_generator(p: u64, e: u32, q: u64, modulus: Vec<u64>, generator: u64) -> Result<Self> {
        let order = (q - 1) as usize;
        let gpoly = poly::decode(generator, p, e as usize);
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let enc = poly::encode(&cur, p);
            if log[enc as usize] != NO_LOG {
                return Err(Error::InvalidInput(format!(
                    "generator {generator} has order {i}, not {order}"
                )));
            }
            log[enc as usize] = i as u32;
            exp.push(enc as u32);
            cur = poly::mul_mod(&cur, &gpoly, &modulus, p);
        }
        if poly::encode(&cur, p) != 1 {
            return Err(Error::InvalidInput(format!("generator {generator} is not a unit")));
        }
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            generator,
            exp,
            log,
            zech: Vec::new(),
            trace: Vec::new(),
        };
        field.zech = (0..order)
            .map(|i| field.log[field.add(field.exp[i] as u64, 1) as usize])
            .collect();
        field.trace = (0..q).map(|x| field.trace_naive(x) as u32).collect();
        Ok(field)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        let f = FiniteField::new(d.p, d.e, Some(d.modulus.clone()))?;
        if d.generator >= f.q {
            return Err(Error::NotAnElement(d.generator));
        }
        Self::with_generator(f.p, f.e, f.q, f.modulus, d.generator)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
            generator: self.generator,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, q − 1.
    pub fn unit_order(&self) -> u64 {
        self.q - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.q
    }

    /// `g^i` for any integer exponent.
    pub fn exp(&self, i: i64) -> u64 {
        self.exp[i.rem_euclid((self.q - 1) as i64) as usize] as u64
    }

    /// Discrete logarithm to the base `g`, in `[0, q − 2]`.
    pub fn discrete_log(&self, x: u64) -> Result<u64> {
        if x >= self.q {
            return Err(Error::NotAnElement(x));
        }
        match self.log[x as usize] {
            NO_LOG => Err(Error::ZeroElement),
            l => Ok(l as u64),
        }
    }

    /// Raw log table lookup; `None` for zero.
    #[inline]
    pub(crate) fn log_of(&self, x: u64) -> Option<u32> {
        match self.log[x as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// Zech logarithm: `Some(z)` with `g^z = 1 + g^i`, `None` if `1 + g^i = 0`.
    #[inline]
    pub(crate) fn zech(&self, i: u32) -> Option<u32> {
        match self.zech[i as usize] {
            NO_LOG => None,
            z => Some(z),
        }
    }

    /// Absolute trace to F_p of `g^i`.
    #[inline]
    pub(crate) fn trace_of_log(&self, i: u32) -> u32 {
        self.trace[self.exp[i as usize] as usize]
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match (self.log_of(a), self.log_of(b)) {
            (Some(x), Some(y)) => self.exp(x as i64 + y as i64),
            _ => 0,
        }
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        let l = self.discrete_log(a)?;
        Ok(self.exp(-(l as i64)))
    }

    /// `a^k` for any integer `k`; `0^k = 0` for `k > 0`, `0^0 = 1`.
    pub fn pow(&self, a: u64, k: i64) -> Result<u64> {
        if k == 0 {
            return Ok(1);
        }
        match self.log_of(a) {
            Some(l) => Ok(self.exp(l as i64 * k)),
            None if k > 0 => Ok(0),
            None => Err(Error::ZeroElement),
        }
    }

    /// Embedding of the prime field: integer `n` ↦ `n·1`.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Absolute trace Tr_{F_q/F_p}(x) as a residue in `[0, p)`.
    pub fn absolute_trace(&self, x: u64) -> u64 {
        self.trace[x as usize] as u64
    }

    fn trace_naive(&self, x: u64) -> u64 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.e {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as i64).expect("positive power");
        }
        debug_assert!(acc < self.p, "trace must lie in the prime field");
        acc
    }

    /// Iterator over the nonzero elements in discrete-log order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        self.exp.iter().map(|x| *x as u64)
    }

    /// Evaluates a polynomial with F_p coefficients (low to high) at `x`.
    pub(crate) fn eval_prime_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, c| self.add(self.mul(acc, x), c % self.p))
    }
}
