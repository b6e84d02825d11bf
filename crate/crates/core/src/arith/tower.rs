//! Degree-m extensions k_m / k together with a fixed embedding k → k_m.

use std::sync::Arc;

use crate::arith::field::{inv_mod_general, FiniteField};
use crate::error::{Error, Result};

/// A tower `k ⊂ k_m` with `[k_m : k] = m`.
///
/// The embedding sends `g ↦ g_m^{s·j}` with `s = (q^m − 1)/(q − 1)`; `j` is
/// determined by requiring the image of the residue `x` to be a root of the
/// modulus of `k`. For `m = 1` the extension is the base field itself.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: Arc<FiniteField>,
    ext: Arc<FiniteField>,
    m: u32,
    norm_exponent: u64,
    embed_log: u64,
    descent: u64,
}

impl FieldTower {
    pub fn new(base: Arc<FiniteField>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let q = base.size();
        if m == 1 {
            return Ok(FieldTower {
                ext: base.clone(),
                base,
                m,
                norm_exponent: 1,
                embed_log: 1,
                descent: 1,
            });
        }
        let ext = Arc::new(FiniteField::new(base.characteristic(), base.degree() * m, None)?);
        let qm = ext.size();
        let s = (qm - 1) / (q - 1);
        // roots of the base modulus inside the image of F_q^*, which is generated by g_m^s
        let root = if base.degree() == 1 {
            0
        } else {
            (0..q - 1)
                .map(|i| ext.exp((s * i) as i64))
                .find(|&r| ext.eval_prime_poly(base.modulus(), r) == 0)
                .expect("k_m contains a copy of k")
        };
        // image of g under x ↦ root
        let digits = base.degree() as usize;
        let mut g = base.generator();
        let mut image = 0;
        let mut power = 1;
        for _ in 0..digits {
            let c = g % base.characteristic();
            g /= base.characteristic();
            image = ext.add(image, ext.mul(ext.from_int(c as i64), power));
            power = ext.mul(power, root);
        }
        let log_image = ext.discrete_log(image)?;
        debug_assert_eq!(log_image % s, 0);
        let j = log_image / s;
        let descent = inv_mod_general(j, q - 1).expect("embedded generator is primitive");
        Ok(FieldTower {
            base,
            ext,
            m,
            norm_exponent: s,
            embed_log: log_image,
            descent,
        })
    }

    /// The trivial tower `k ⊂ k`.
    pub fn trivial(base: Arc<FiniteField>) -> Self {
        FieldTower::new(base, 1).expect("m = 1 always succeeds")
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn ext(&self) -> &FiniteField {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Embeds a base-field element into k_m.
    pub fn embed(&self, x: u64) -> Result<u64> {
        if !self.base.contains(x) {
            return Err(Error::NotAnElement(x));
        }
        Ok(match self.base.log_of(x) {
            None => 0,
            Some(l) => self.ext.exp((l as u64 * self.embed_log) as i64),
        })
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn descend(&self, y: u64) -> Result<u64> {
        if !self.ext.contains(y) {
            return Err(Error::NotAnElement(y));
        }
        match self.ext.log_of(y) {
            None => Ok(0),
            Some(l) => {
                let l = l as u64;
                if l % self.norm_exponent != 0 {
                    return Err(Error::InvalidInput(format!("{y} is not in the base field")));
                }
                Ok(self.base.exp(self.norm_log(l / self.norm_exponent) as i64))
            }
        }
    }

    /// `dlog_g N_{k_m/k}(g_m^a)`, i.e. `a·j^{-1} mod (q − 1)`.
    #[inline]
    pub(crate) fn norm_log(&self, a: u64) -> u64 {
        let q1 = self.base.size() - 1;
        ((a % q1) * self.descent) % q1
    }

    /// `(Tr_{k_m/k}(x), N_{k_m/k}(x))` as base-field elements.
    pub fn trace_and_norm(&self, x: u64) -> Result<(u64, u64)> {
        if !self.ext.contains(x) {
            return Err(Error::NotAnElement(x));
        }
        let q = self.base.size() as i64;
        let mut tr = 0;
        let mut nm = 1;
        let mut y = x;
        for _ in 0..self.m {
            tr = self.ext.add(tr, y);
            nm = self.ext.mul(nm, y);
            y = self.ext.pow(y, q)?;
        }
        Ok((self.descend(tr)?, self.descend(nm)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u64, e: u32, m: u32) -> FieldTower {
        FieldTower::new(Arc::new(FiniteField::new(p, e, None).unwrap()), m).unwrap()
    }

    #[test]
    fn f4_over_f2_trace_norm() {
        let t = tower(2, 1, 2);
        let g = t.ext().generator();
        assert_eq!(t.trace_and_norm(g).unwrap().0, 1);
        assert_eq!(t.trace_and_norm(1).unwrap(), (0, 1));
    }

    #[test]
    fn f9_over_f3_norm_is_fourth_power() {
        let t = tower(3, 1, 2);
        for x in 1..9 {
            let (_, n) = t.trace_and_norm(x).unwrap();
            assert_eq!(t.embed(n).unwrap(), t.ext().pow(x, 4).unwrap());
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for (p, e, m) in [(2, 2, 2), (3, 2, 2), (2, 1, 3), (5, 1, 2), (2, 2, 3)] {
            let t = tower(p, e, m);
            let k = t.base();
            for a in 0..k.size() {
                for b in 0..k.size() {
                    let ea = t.embed(a).unwrap();
                    let eb = t.embed(b).unwrap();
                    assert_eq!(t.embed(k.add(a, b)).unwrap(), t.ext().add(ea, eb));
                    assert_eq!(t.embed(k.mul(a, b)).unwrap(), t.ext().mul(ea, eb));
                }
                assert_eq!(t.descend(t.embed(a).unwrap()).unwrap(), a);
            }
        }
    }

    #[test]
    fn norm_log_matches_direct_norm() {
        let t = tower(2, 2, 2);
        for a in 0..(t.ext().size() - 1) {
            let x = t.ext().exp(a as i64);
            let (_, n) = t.trace_and_norm(x).unwrap();
            assert_eq!(t.base().discrete_log(n).unwrap(), t.norm_log(a));
        }
    }

    #[test]
    fn trace_and_norm_are_frobenius_fixed() {
        let t = tower(3, 1, 3);
        for x in 0..27 {
            let (tr, n) = t.trace_and_norm(x).unwrap();
            assert!(tr < 3 && n < 3);
            if x != 0 {
                assert_ne!(n, 0);
            }
        }
    }
}
