//! Lattice operations on exponent matrices, cones and polytopes.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::faces::{dot, members, FaceLattice, LatticePolytope, Mask, RationalCone};
use crate::lattice::matrix::{IntMatrix, Snf};
use crate::scalar::gcd;

/// The `n × N` exponent matrix `A`, columns `w_1, …, w_N ∈ Z^n`, of rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct ExponentMatrix {
    n: usize,
    columns: Vec<Vec<i64>>,
}

impl ExponentMatrix {
    /// From row-major data; the rows must have equal length and full rank.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = IntMatrix::<i64>::from_rows(rows)?;
        let n = m.nrows();
        let rank = m.rank();
        if rank != n {
            return Err(Error::RankDeficient { expected: n, rank });
        }
        Ok(ExponentMatrix { n, columns: (0..m.ncols()).map(|j| m.column(j)).collect() })
    }

    /// From columns `w_j ∈ Z^n`. An empty column list is allowed only for `n = 0`.
    pub fn from_columns(n: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!("columns must lie in Z^{n}")));
        }
        let rank = rank_cols(&columns);
        if rank != n {
            return Err(Error::RankDeficient { expected: n, rank });
        }
        Ok(ExponentMatrix { n, columns })
    }

    /// Torus dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of monomials `N`.
    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[i64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.columns.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn to_matrix(&self) -> IntMatrix<i64> {
        IntMatrix::from_rows(self.rows()).unwrap_or_else(|_| IntMatrix::zeros(self.n, self.columns.len()))
    }

    /// Δ, the convex hull of `{0, w_1, …, w_N}`.
    pub fn newton_polytope(&self) -> LatticePolytope {
        let mut pts = vec![vec![0; self.n]];
        pts.extend(self.columns.iter().cloned());
        LatticePolytope::new(self.n, pts).expect("columns have length n")
    }

    /// δ, the cone generated by `w_1, …, w_N`.
    pub fn cone(&self) -> RationalCone {
        positive_hull(self)
    }

    /// True if the columns generate `Z^n` as a group.
    pub fn columns_generate_lattice(&self) -> bool {
        let snf = self.to_matrix().smith_normal_form();
        snf.rank == self.n && snf.divisors.iter().all(|d| *d == 1)
    }
}

fn rank_cols(columns: &[Vec<i64>]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    IntMatrix::<i64>::from_rows(columns.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

impl TryFrom<Vec<Vec<i64>>> for ExponentMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        ExponentMatrix::from_rows(rows)
    }
}

impl From<ExponentMatrix> for Vec<Vec<i64>> {
    fn from(a: ExponentMatrix) -> Self {
        a.rows()
    }
}

/// δ = positive hull of the columns of `A`.
pub fn positive_hull(a: &ExponentMatrix) -> RationalCone {
    RationalCone::new(a.n(), a.columns().to_vec()).expect("columns have length n")
}

/// Saturated sublattice of `Z^n`, basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<Vec<i64>>,
}

impl Sublattice {
    /// Saturation of the span of the given vectors.
    pub fn saturate(ambient: usize, vectors: &[Vec<i64>]) -> Self {
        let nonzero: Vec<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|x| *x != 0)).cloned().collect();
        if nonzero.is_empty() {
            return Sublattice { ambient, basis: Vec::new() };
        }
        let m = IntMatrix::<i64>::from_rows(nonzero).expect("vectors share a length");
        Sublattice { ambient, basis: m.saturation().to_rows() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis rows.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix<i64> {
        if self.basis.is_empty() {
            IntMatrix::zeros(0, self.ambient)
        } else {
            IntMatrix::from_rows(self.basis.clone()).expect("basis rows share a length")
        }
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let r = self.rank();
        if r == 0 {
            return v.iter().all(|x| *x == 0).then(Vec::new);
        }
        // solve y·B = v using the Smith form of B
        let snf = self.basis_matrix().smith_normal_form();
        let w = snf.v.left_apply(v);
        let mut z = Vec::with_capacity(r);
        for (i, wi) in w.iter().enumerate() {
            if i < r {
                if wi % snf.divisors[i] != 0 {
                    return None;
                }
                z.push(wi / snf.divisors[i]);
            } else if *wi != 0 {
                return None;
            }
        }
        // y = z·U since U·B·V = D means y·B = z·D·V^{-1} with y = z·U
        z.resize(snf.u.nrows(), 0);
        Some(snf.u.left_apply(&z))
    }

    /// A projection `Z^n → Z^{n−r}` with kernel this lattice.
    pub fn quotient_map(&self) -> IntMatrix<i64> {
        let n = self.ambient;
        let r = self.rank();
        let v = if r == 0 { IntMatrix::identity(n) } else { self.basis_matrix().smith_normal_form().v };
        // x ↦ (x·V)_{r..n}
        let cols: Vec<Vec<i64>> = (r..n).map(|j| v.column(j)).collect();
        if cols.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            IntMatrix::from_rows(cols).expect("columns of V")
        }
    }
}

/// `Z^n ∩ span(τ)` for face `i` of a cone.
pub fn span_lattice(cone: &RationalCone, face: usize) -> Sublattice {
    Sublattice::saturate(cone.ambient_dim(), &cone.face_generators(face))
}

/// Either kind of object carrying faces.
#[derive(Clone, Copy, Debug)]
pub enum FaceOf<'a> {
    Polytope(&'a LatticePolytope),
    Cone(&'a RationalCone),
}

/// The cone generated by `u' − u` with `u'` in the object and `u` in face `i`.
pub fn cone_of_face(obj: FaceOf<'_>, face: usize) -> Result<RationalCone> {
    match obj {
        FaceOf::Polytope(p) => {
            if face >= p.face_lattice().len() {
                return Err(Error::NotAFace(format!("index {face}")));
            }
            let all = p.vertices();
            let sub = p.face_vertices(face);
            let mut gens = Vec::new();
            for u in &sub {
                for w in &all {
                    let d: Vec<i64> = w.iter().zip(u).map(|(a, b)| a - b).collect();
                    if !gens.contains(&d) {
                        gens.push(d);
                    }
                }
            }
            RationalCone::new(p.ambient_dim(), gens)
        }
        FaceOf::Cone(c) => {
            if face >= c.face_lattice().len() {
                return Err(Error::NotAFace(format!("index {face}")));
            }
            let mut gens = c.generators().to_vec();
            gens.extend(c.face_generators(face).into_iter().map(|g| g.into_iter().map(|x| -x).collect()));
            RationalCone::new(c.ambient_dim(), gens)
        }
    }
}

/// Image of `cone` in `Z^n / (Z^n ∩ span τ)`, in coordinates of a quotient basis.
pub fn quotient_cone(cone: &RationalCone, face: usize) -> Result<RationalCone> {
    if face >= cone.face_lattice().len() {
        return Err(Error::NotAFace(format!("index {face}")));
    }
    let lat = span_lattice(cone, face);
    let proj = lat.quotient_map();
    let gens: Vec<Vec<i64>> = cone.generators().iter().map(|g| proj.apply(g)).collect();
    RationalCone::new(proj.nrows(), gens)
}

/// Face poset of poly(C): the faces of a pointed cone other than `{0}`,
/// dimensions lowered by one.
pub fn poly_of_cone(cone: &RationalCone) -> Result<FaceLattice> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let l = cone.face_lattice();
    let rest: BTreeSet<Mask> = l.faces().iter().skip(1).map(|f| f.mask()).collect();
    let dims: HashMap<Mask, usize> = l.faces().iter().skip(1).map(|f| (f.mask(), f.dim - 1)).collect();
    let gens: HashMap<Mask, Vec<usize>> = l.faces().iter().map(|f| (f.mask(), f.generators.clone())).collect();
    Ok(FaceLattice::from_masks(rest, |m| dims[&m], |m| gens[&m].clone()))
}

/// `d!·vol(P)` relative to `Z^n ∩ span(P − P)`; a point has volume 1.
pub fn normalized_volume(p: &LatticePolytope) -> u64 {
    let l = p.face_lattice();
    let top = l.top();
    let mut memo: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    let simplices = triangulate(l, top, &mut memo);
    let pts = p.points();
    simplices
        .iter()
        .map(|s| {
            if s.len() == 1 {
                return 1;
            }
            let edges: Vec<Vec<i64>> =
                s[1..].iter().map(|&j| pts[j].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect()).collect();
            let snf = IntMatrix::<i64>::from_rows(edges).expect("edges share a length").smith_normal_form();
            debug_assert_eq!(snf.rank, s.len() - 1);
            snf.divisors.iter().product::<i64>() as u64
        })
        .sum()
}

/// Pulling triangulation of face `i`, as lists of point indices.
pub(crate) fn triangulate(l: &FaceLattice, i: usize, memo: &mut HashMap<usize, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(&i) {
        return t.clone();
    }
    let f = l.face(i);
    let out = if f.dim == 0 {
        vec![vec![f.generators[0]]]
    } else {
        let v = f.generators[0];
        let mut out = Vec::new();
        for g in l.facets_of(i) {
            if l.face(g).contains_member(v) {
                continue;
            }
            for mut s in triangulate(l, g, memo) {
                s.insert(0, v);
                out.push(s);
            }
        }
        out
    };
    memo.insert(i, out.clone());
    out
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &IntMatrix<i64>) -> Snf<i64> {
    m.smith_normal_form()
}

/// Some `c ∈ Z^n` with `Σ_i c_i w_ij = 1` for every column, or `None`.
pub fn nonconfluence_vector(a: &ExponentMatrix) -> Option<Vec<i64>> {
    let n = a.n();
    let big_n = a.ncols();
    if big_n == 0 {
        return Some(vec![0; n]);
    }
    // Aᵀ c = 1 with Aᵀ = columns as rows
    let at = IntMatrix::<i64>::from_rows(a.columns().to_vec()).expect("columns share a length");
    let snf = at.smith_normal_form();
    let b = snf.u.apply(&vec![1; big_n]);
    let mut y = vec![0i64; n];
    for (i, bi) in b.iter().enumerate() {
        if i < snf.rank {
            if bi % snf.divisors[i] != 0 {
                return None;
            }
            y[i] = bi / snf.divisors[i];
        } else if *bi != 0 {
            return None;
        }
    }
    Some(snf.v.apply(&y))
}

/// Unimodular `n × n` matrix whose first row is the primitive vector `c`.
pub fn extend_to_unimodular(c: &[i64]) -> Result<IntMatrix<i64>> {
    let g = c.iter().fold(0i64, |g, x| gcd(&g, x));
    if g != 1 {
        return Err(Error::NotPrimitive(format!("{c:?} has gcd {g}")));
    }
    let n = c.len();
    let row = IntMatrix::<i64>::from_rows(vec![c.to_vec()]).expect("one row");
    let snf = row.smith_normal_form();
    // u·c·V = e_1 ⇒ c = u^{-1}·(first row of V^{-1}), u = ±1
    let mut rows = snf.v_inv.to_rows();
    rows[0] = c.to_vec();
    let pivot = c.iter().position(|x| *x != 0).expect("primitive vectors are nonzero");
    for r in rows.iter_mut().skip(1) {
        let k = r[pivot].div_euclid(c[pivot].abs()) * c[pivot].signum();
        for (x, ci) in r.iter_mut().zip(c) {
            *x -= k * ci;
        }
    }
    let mut m = IntMatrix::from_rows(rows).expect("square");
    if n >= 2 && m.determinant() < 0 {
        for j in 0..n {
            m[(n - 1, j)] = -m[(n - 1, j)];
        }
        // keep the pivot entry reduced after the sign flip
        let r = &mut m;
        let k = r[(n - 1, pivot)].div_euclid(c[pivot].abs()) * c[pivot].signum();
        for j in 0..n {
            r[(n - 1, j)] -= k * c[j];
        }
    }
    Ok(m)
}

/// Indices of the columns of `A` lying in face `i` of δ.
pub fn columns_in_face(cone: &RationalCone, face: usize) -> Vec<usize> {
    members(cone.face_lattice().face(face).mask()).collect()
}

/// Checks `c·w_j = 1` for every column.
pub fn is_nonconfluence_vector(a: &ExponentMatrix, c: &[i64]) -> bool {
    a.columns().iter().all(|w| dot(c, w) == 1)
}
