//! Dense integer matrices with Smith and Hermite normal forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// Row-major dense matrix over an exact integer scalar.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<T>>", try_from = "Vec<Vec<T>>")]
#[serde(bound(serialize = "T: IntScalar + Serialize", deserialize = "T: IntScalar + Deserialize<'de>"))]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> IntMatrix<T> {
    /// Builds a matrix from rows; rejects ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let nrows = rows.len();
        Ok(IntMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|x| <T as IntScalar>::from_i64(*x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| v.iter().enumerate().fold(T::zero(), |acc, (i, x)| acc + x.clone() * self[(i, j)].clone()))
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, x)| acc + a.clone() * x.clone()))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * k.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * k.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            for i in rank + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let (piv, x) = (a[(rank, c)].clone(), a[(i, c)].clone());
                for j in c..a.cols {
                    a[(i, j)] = a[(i, j)].clone() * piv.clone() - a[(rank, j)].clone() * x.clone();
                }
                let g = a.row(i).iter().fold(T::zero(), |g, v| g.gcd(v));
                if !g.is_zero() && !g.is_one() {
                    for j in 0..a.cols {
                        a[(i, j)] = a[(i, j)].clone() / g.clone();
                    }
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Smith normal form `U·M·V = D`.
    pub fn smith_normal_form(&self) -> Snf<T> {
        let (m, n) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = Self::identity(m);
        let mut v = Self::identity(n);
        let mut v_inv = Self::identity(n);
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[(i, j)].is_zero() && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &k);
                u.add_row(i, t, &k);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &k);
                v.add_col(j, t, &k);
                v_inv.add_row(t, j, &-k.clone());
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            if let Some(i) = bad {
                let one = T::one();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        let divisors: Vec<T> = (0..m.min(n)).map(|i| d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect();
        Snf { rank: divisors.len(), u, d, v, v_inv, divisors }
    }

    /// Row-style Hermite normal form of the row lattice, zero rows dropped.
    pub fn hermite_normal_form(&self) -> Self {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            // gcd-combine column c into row r
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let (x, y) = (a[(r, c)].clone(), a[(i, c)].clone());
                let e = x.extended_gcd(&y);
                let (g, s, tt) = (e.gcd, e.x, e.y);
                let (xg, yg) = (x / g.clone(), y / g);
                let row_r: Vec<T> = a.row(r).to_vec();
                let row_i: Vec<T> = a.row(i).to_vec();
                for j in 0..a.cols {
                    a[(r, j)] = s.clone() * row_r[j].clone() + tt.clone() * row_i[j].clone();
                    a[(i, j)] = -yg.clone() * row_r[j].clone() + xg.clone() * row_i[j].clone();
                }
            }
            if a[(r, c)].is_zero() {
                continue;
            }
            if a[(r, c)].is_negative() {
                a.negate_row(r);
            }
            for i in 0..r {
                let k = -a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row(i, r, &k);
            }
            r += 1;
        }
        IntMatrix { rows: r, cols: a.cols, data: a.data[..r * a.cols].to_vec() }
    }

    /// Basis of the right integer kernel `{x : M x = 0}`, as rows.
    pub fn kernel(&self) -> Self {
        let snf = self.smith_normal_form();
        let cols: Vec<Vec<T>> = (snf.rank..self.cols).map(|j| snf.v.column(j)).collect();
        if cols.is_empty() {
            return Self::zeros(0, self.cols);
        }
        Self::from_rows(cols).expect("kernel columns have equal length").hermite_normal_form()
    }

    /// Basis of the saturated lattice `Q·rowspace ∩ Z^n`, in Hermite normal form.
    pub fn saturation(&self) -> Self {
        let snf = self.smith_normal_form();
        if snf.rank == 0 {
            return Self::zeros(0, self.cols);
        }
        let rows: Vec<Vec<T>> = (0..snf.rank).map(|i| snf.v_inv.row(i).to_vec()).collect();
        Self::from_rows(rows).expect("rows of V^-1").hermite_normal_form()
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: IntScalar> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl<T: IntScalar> From<IntMatrix<T>> for Vec<Vec<T>> {
    fn from(m: IntMatrix<T>) -> Self {
        m.to_rows()
    }
}

impl<T: IntScalar> TryFrom<Vec<Vec<T>>> for IntMatrix<T> {
    type Error = Error;
    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

/// Smith decomposition: `u · m · v = d` with `u`, `v` unimodular and
/// `v_inv = v^{-1}`; `divisors` are the nonzero diagonal entries.
#[derive(Clone, Debug)]
pub struct Snf<T: IntScalar> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
    pub divisors: Vec<T>,
    pub rank: usize,
}
