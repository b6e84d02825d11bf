//! Hyp(x; χ_c) for every character c at once.
//!
//! Grouping torus points by `b = dlog N(t) ∈ (Z/(q−1))^n` gives
//! `Hyp(x; χ_c) = Σ_b ζ_{q−1}^{c·b} h(b)` with `h(b) = Σ_{N(t)=g^b} ψ(F(t, x))`,
//! an n-dimensional DFT over Z/(q−1) with exact cyclotomic twiddles.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::lattice::ExponentMatrix;
use crate::sums::{check_budget, decode_point, LogEvaluator};
use crate::CycloNumber;

/// Values indexed by `c ∈ (Z/(q−1))^n`, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub order: u64,
    pub n: usize,
    pub values: Vec<CycloNumber>,
}

impl CharacterTable {
    pub fn index(&self, c: &[u64]) -> usize {
        c.iter().fold(0, |acc, ci| acc * self.order as usize + (ci % self.order) as usize)
    }

    pub fn get(&self, c: &[u64]) -> &CycloNumber {
        &self.values[self.index(c)]
    }

    /// `(c, Hyp(x; χ_c))` in index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<u64>, &CycloNumber)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| {
            let mut c = vec![0; self.n];
            decode_point(i as u128, self.order, &mut c);
            (c, v)
        })
    }
}

/// The full character table at `x`.
pub fn batch_all_characters(tower: &FieldTower, a: &ExponentMatrix, x: &[u64], budget: u128) -> Result<CharacterTable> {
    if x.len() != a.ncols() {
        return Err(Error::DimensionMismatch(format!("x has {} entries, N = {}", x.len(), a.ncols())));
    }
    let ext = tower.ext();
    let n = a.n();
    let total = check_budget(ext, n, budget)?;
    let order = tower.base().unit_order();
    let table_len = (order as usize).pow(n as u32);
    let p = ext.characteristic();
    let m = (p * order) as usize;
    let q1 = ext.unit_order();
    let eval = LogEvaluator::new(ext, a, x);

    // h[b] in the group ring of μ_{p(q−1)}, only ζ_p powers occupied
    let chunk = q1 as u128;
    let h = (0..total.div_ceil(chunk) as u64)
        .into_par_iter()
        .fold(
            || vec![0i64; table_len * m],
            |mut h, ch| {
                let mut logs = vec![0u64; n];
                let mut b = vec![0u64; n];
                let start = ch as u128 * chunk;
                for idx in start..(start + chunk).min(total) {
                    decode_point(idx, q1, &mut logs);
                    for (bi, ai) in b.iter_mut().zip(&logs) {
                        *bi = tower.norm_log(*ai);
                    }
                    let cell = b.iter().fold(0, |acc, bi| acc * order as usize + *bi as usize);
                    let tr = eval.trace(&logs);
                    h[cell * m + (tr * order) as usize % m] += 1;
                }
                h
            },
        )
        .reduce(
            || vec![0i64; table_len * m],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );

    // one axis at a time: new[.., c_i, ..] = Σ_{b_i} ζ^{c_i b_i} old[.., b_i, ..]
    let mut data = h;
    let o = order as usize;
    for axis in 0..n {
        let stride = o.pow((n - 1 - axis) as u32);
        let mut next = vec![0i64; data.len()];
        for cell in 0..table_len {
            let ci = cell / stride % o;
            let base = cell - ci * stride;
            let out = &mut next[cell * m..(cell + 1) * m];
            for bi in 0..o {
                let src = &data[(base + bi * stride) * m..(base + bi * stride + 1) * m];
                let shift = (ci * bi % o) * p as usize;
                for (k, v) in src.iter().enumerate() {
                    if *v != 0 {
                        out[(k + shift) % m] += v;
                    }
                }
            }
        }
        data = next;
    }
    let values = data.chunks(m).map(|ring| CycloNumber::from_group_ring(m as u64, ring)).collect();
    Ok(CharacterTable { order, n, values })
}
