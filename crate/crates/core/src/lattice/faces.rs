//! Cones, polytopes and their face lattices.
//!
//! Facets are found by brute force: every linearly independent choice of
//! `s − 1` generators of an `s`-dimensional cone determines a candidate
//! hyperplane inside the span, whose normal is the vector of signed maximal
//! minors. Faces are the intersections of facets. Polytopes are handled by
//! homogenizing `p ↦ (1, p)`.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::matrix::IntMatrix;
use crate::scalar::gcd;

pub type Mask = u64;

/// Most generators a cone or polytope may have.
pub const MAX_GENERATORS: usize = 64;

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn rank_of(vectors: &[&[i64]], ambient: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    IntMatrix::<i64>::from_rows(vectors.iter().map(|v| v.to_vec()).collect())
        .map(|m| m.rank())
        .unwrap_or_else(|_| panic!("vectors must all have length {ambient}"))
}

pub(crate) fn members(mask: Mask) -> impl Iterator<Item = usize> {
    (0..MAX_GENERATORS).filter(move |i| mask >> i & 1 == 1)
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, x| gcd(&g, x));
    if g <= 1 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

/// One element of a [`FaceLattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// Indices of all input vectors lying on the face.
    pub members: Vec<usize>,
    /// Vertices (polytopes) or nonzero generators (cones) of the face.
    pub generators: Vec<usize>,
    /// Faces covering this one.
    pub parents: Vec<usize>,
    pub(crate) mask: Mask,
}

impl Face {
    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn contains_member(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Face", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("parents", &self.parents)?;
        st.end()
    }
}

/// Faces ordered by (dimension, member set); the last face is the maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceLattice {
    faces: Vec<Face>,
}

impl FaceLattice {
    pub(crate) fn from_masks(masks: BTreeSet<Mask>, dim_of: impl Fn(Mask) -> usize, gens_of: impl Fn(Mask) -> Vec<usize>) -> Self {
        let mut faces: Vec<Face> = masks
            .into_iter()
            .map(|mask| Face {
                dim: dim_of(mask),
                members: members(mask).collect(),
                generators: gens_of(mask),
                parents: Vec::new(),
                mask,
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.members).cmp(&(b.dim, &b.members)));
        for i in 0..faces.len() {
            let parents: Vec<usize> = (0..faces.len())
                .filter(|&j| {
                    faces[j].dim == faces[i].dim + 1 && faces[i].mask & !faces[j].mask == 0
                })
                .collect();
            faces[i].parents = parents;
        }
        FaceLattice { faces }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// Index of the face with exactly this member set.
    pub fn find(&self, mask: Mask) -> Option<usize> {
        self.faces.iter().position(|f| f.mask == mask)
    }

    /// `faces[i] ⊆ faces[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.faces[i].mask & !self.faces[j].mask == 0
    }

    /// Faces of codimension one in `faces[i]`.
    pub fn facets_of(&self, i: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&j| self.faces[j].dim + 1 == self.faces[i].dim && self.leq(j, i))
            .collect()
    }

    /// Indices of faces of the given dimension.
    pub fn of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == d).collect()
    }

    /// Face counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.faces.last().map_or(0, |f| f.dim);
        let mut f = vec![0; top + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }
}

/// Cone data: span basis, facet normals (inside the span), tight masks.
struct ConeFacets {
    span_rank: usize,
    normals: Vec<Vec<i64>>,
    tight: Vec<Mask>,
}

fn cone_facets(gens: &[Vec<i64>], ambient: usize) -> ConeFacets {
    assert!(gens.len() <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
    let basis = if gens.is_empty() {
        IntMatrix::<i64>::zeros(0, ambient)
    } else {
        IntMatrix::from_rows(gens.to_vec()).expect("generators share a length").saturation()
    };
    let s = basis.nrows();
    let mut normals = Vec::new();
    let mut tight: Vec<Mask> = Vec::new();
    if s == 0 {
        return ConeFacets { span_rank: 0, normals, tight };
    }
    // coordinates of each generator against the span basis, via dot products
    let pairing: Vec<Vec<i64>> = gens.iter().map(|g| basis.to_rows().iter().map(|l| dot(g, l)).collect()).collect();
    let nonzero: Vec<usize> = (0..gens.len()).filter(|&j| gens[j].iter().any(|x| *x != 0)).collect();
    let mut try_subset = |subset: &[usize]| {
        if tight.iter().any(|t| subset.iter().all(|&j| t >> j & 1 == 1)) {
            return;
        }
        // λ_k = (−1)^k det(G without column k), G_ik = g_i · ℓ_k
        let lambda: Vec<i64> = (0..s)
            .map(|k| {
                let rows: Vec<Vec<i64>> = subset
                    .iter()
                    .map(|&i| (0..s).filter(|&c| c != k).map(|c| pairing[i][c]).collect())
                    .collect();
                let det = if rows.is_empty() {
                    1
                } else {
                    IntMatrix::<i64>::from_rows(rows).expect("square minor").determinant()
                };
                if k % 2 == 0 {
                    det
                } else {
                    -det
                }
            })
            .collect();
        if lambda.iter().all(|x| *x == 0) {
            return;
        }
        let mut a = vec![0i64; ambient];
        for (k, l) in basis.to_rows().iter().enumerate() {
            for (ai, li) in a.iter_mut().zip(l) {
                *ai += lambda[k] * li;
            }
        }
        let a = primitive(a);
        let vals: Vec<i64> = gens.iter().map(|g| dot(&a, g)).collect();
        let pos = vals.iter().any(|v| *v > 0);
        let neg = vals.iter().any(|v| *v < 0);
        if pos && neg {
            return;
        }
        let a = if neg { a.into_iter().map(|x| -x).collect() } else { a };
        let mask = vals.iter().enumerate().filter(|(_, v)| **v == 0).fold(0, |m, (j, _)| m | 1 << j);
        if !tight.contains(&mask) {
            tight.push(mask);
            normals.push(a);
        }
    };
    for_each_combination(&nonzero, s - 1, &mut try_subset);
    ConeFacets { span_rank: s, normals, tight }
}

fn for_each_combination(items: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn intersection_closure(full: Mask, facets: &[Mask]) -> BTreeSet<Mask> {
    let mut set: BTreeSet<Mask> = BTreeSet::from([full]);
    for f in facets {
        let new: Vec<Mask> = set.iter().map(|s| s & f).collect();
        set.extend(new);
    }
    set
}

fn full_mask(n: usize) -> Mask {
    if n == 64 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Convex polyhedral cone generated by finitely many integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    ambient: usize,
    generators: Vec<Vec<i64>>,
    facets: Vec<Vec<i64>>,
    dim: usize,
    lattice: FaceLattice,
}

impl RationalCone {
    /// Positive hull of the given vectors.
    pub fn new(ambient: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("generators must lie in Z^{ambient}")));
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::InvalidInput(format!("at most {MAX_GENERATORS} generators")));
        }
        let cf = cone_facets(&generators, ambient);
        let full = full_mask(generators.len());
        let masks = intersection_closure(full, &cf.tight);
        let gens = &generators;
        let lattice = FaceLattice::from_masks(
            masks,
            |m| rank_of(&members(m).map(|j| gens[j].as_slice()).collect::<Vec<_>>(), ambient),
            |m| members(m).filter(|&j| gens[j].iter().any(|x| *x != 0)).collect(),
        );
        Ok(RationalCone { ambient, dim: cf.span_rank, facets: cf.normals, lattice, generators })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Primitive inner facet normals, chosen inside the linear span.
    pub fn facet_normals(&self) -> &[Vec<i64>] {
        &self.facets
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// True when the cone contains no line, i.e. `{0}` is a face.
    pub fn is_pointed(&self) -> bool {
        self.lattice.faces()[0].dim == 0
    }

    /// Index of the face `{0}`, if the cone is pointed.
    pub fn apex(&self) -> Option<usize> {
        self.is_pointed().then_some(0)
    }

    /// Generators of face `i`.
    pub fn face_generators(&self, i: usize) -> Vec<Vec<i64>> {
        self.lattice.face(i).members.iter().map(|&j| self.generators[j].clone()).collect()
    }

    /// The face `i` as a cone in its own right.
    pub fn face_cone(&self, i: usize) -> RationalCone {
        RationalCone::new(self.ambient, self.face_generators(i)).expect("face generators are valid")
    }

    /// Membership test: `v` lies in the span and satisfies every facet inequality.
    pub fn contains(&self, v: &[i64]) -> bool {
        let mut stacked: Vec<&[i64]> = self.generators.iter().map(|g| g.as_slice()).collect();
        let before = rank_of(&stacked, self.ambient);
        stacked.push(v);
        rank_of(&stacked, self.ambient) == before && self.facets.iter().all(|a| dot(a, v) >= 0)
    }

    /// Proper faces `τ ≠ δ` of codimension one.
    pub fn codim_one_faces(&self) -> Vec<usize> {
        let top = self.lattice.top();
        self.lattice.facets_of(top)
    }

    /// Proper faces `τ ≠ δ`.
    pub fn proper_faces(&self) -> Vec<usize> {
        (0..self.lattice.top()).collect()
    }
}

/// Convex hull of finitely many integer points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient: usize,
    points: Vec<Vec<i64>>,
    facets: Vec<(Vec<i64>, i64)>,
    dim: usize,
    lattice: FaceLattice,
}

impl LatticePolytope {
    /// Convex hull; repeated points are merged.
    pub fn new(ambient: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("hull of an empty point set".into()));
        }
        if points.iter().any(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("points must lie in Z^{ambient}")));
        }
        let mut unique: Vec<Vec<i64>> = Vec::new();
        for p in points {
            if !unique.contains(&p) {
                unique.push(p);
            }
        }
        let homog: Vec<Vec<i64>> = unique.iter().map(|p| std::iter::once(1).chain(p.iter().copied()).collect()).collect();
        let cf = cone_facets(&homog, ambient + 1);
        let full = full_mask(unique.len());
        let mut masks = intersection_closure(full, &cf.tight);
        masks.remove(&0);
        let pts = &unique;
        let affine_dim = |m: Mask| {
            let idx: Vec<usize> = members(m).collect();
            let diffs: Vec<Vec<i64>> =
                idx.iter().skip(1).map(|&j| pts[j].iter().zip(&pts[idx[0]]).map(|(a, b)| a - b).collect()).collect();
            rank_of(&diffs.iter().map(|d| d.as_slice()).collect::<Vec<_>>(), ambient)
        };
        let vertex_masks: Vec<Mask> = masks.iter().copied().filter(|m| m.count_ones() == 1).collect();
        let lattice = FaceLattice::from_masks(masks.clone(), affine_dim, |m| {
            vertex_masks.iter().filter(|v| *v & m == **v).map(|v| v.trailing_zeros() as usize).collect()
        });
        let facets = cf.normals.into_iter().map(|a| (a[1..].to_vec(), a[0])).collect();
        Ok(LatticePolytope { ambient, dim: cf.span_rank - 1, points: unique, facets, lattice })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Distinct input points, in order of first appearance.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let top = self.lattice.top();
        self.lattice.face(top).generators.iter().map(|&j| self.points[j].clone()).collect()
    }

    /// Facet inequalities `a·x + b ≥ 0`.
    pub fn facet_inequalities(&self) -> &[(Vec<i64>, i64)] {
        &self.facets
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// Vertices of face `i`.
    pub fn face_vertices(&self, i: usize) -> Vec<Vec<i64>> {
        self.lattice.face(i).generators.iter().map(|&j| self.points[j].clone()).collect()
    }

    /// The face `i` as a polytope in its own right.
    pub fn face_polytope(&self, i: usize) -> LatticePolytope {
        LatticePolytope::new(self.ambient, self.face_vertices(i)).expect("face vertices are valid")
    }
}

/// Convex hull of a point set.
pub fn hull(ambient: usize, points: Vec<Vec<i64>>) -> Result<LatticePolytope> {
    LatticePolytope::new(ambient, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_hull() {
        let p = hull(1, vec![vec![0], vec![1], vec![-1]]).unwrap();
        assert_eq!(p.dim(), 1);
        let mut v = p.vertices();
        v.sort();
        assert_eq!(v, vec![vec![-1], vec![1]]);
        assert_eq!(p.face_lattice().f_vector(), vec![2, 1]);
    }

    #[test]
    fn unit_square_hull() {
        let p = hull(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.face_lattice().f_vector(), vec![4, 4, 1]);
        assert_eq!(p.facet_inequalities().len(), 4);
        for (a, b) in p.facet_inequalities() {
            for q in p.points() {
                assert!(dot(a, q) + b >= 0);
            }
        }
    }

    #[test]
    fn single_point_hull() {
        let p = hull(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.face_lattice().len(), 1);
        assert_eq!(p.vertices(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let p = hull(2, vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.face_lattice().f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn lower_dimensional_hull() {
        let p = hull(3, vec![vec![0, 0, 0], vec![1, 1, 0], vec![2, 2, 0]]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn line_cone_has_no_proper_faces() {
        let c = RationalCone::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert_eq!(c.face_lattice().len(), 1);
        assert!(c.proper_faces().is_empty());
        assert!(!c.is_pointed());
    }

    #[test]
    fn ray_cone() {
        let c = RationalCone::new(1, vec![vec![1]]).unwrap();
        assert!(c.is_pointed());
        assert_eq!(c.face_lattice().f_vector(), vec![1, 1]);
        assert_eq!(c.facet_normals(), &[vec![1]]);
    }

    #[test]
    fn quadrant_and_half_plane() {
        let q = RationalCone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(q.face_lattice().f_vector(), vec![1, 2, 1]);
        let h = RationalCone::new(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert!(!h.is_pointed());
        assert_eq!(h.face_lattice().len(), 2);
        assert_eq!(h.face_lattice().face(0).dim, 1);
        assert_eq!(h.facet_normals(), &[vec![0, 1]]);
    }

    #[test]
    fn cone_over_square() {
        let c = RationalCone::new(3, vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(c.face_lattice().f_vector(), vec![1, 4, 4, 1]);
        assert!(c.contains(&[1, 1, 2]));
        assert!(!c.contains(&[2, 0, 1]));
    }

    #[test]
    fn zero_generators_lie_on_every_face() {
        let c = RationalCone::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(c.face_lattice().f_vector(), vec![1, 2, 1]);
        assert!(c.face_lattice().faces().iter().all(|f| f.contains_member(0)));
        let z = RationalCone::new(2, vec![]).unwrap();
        assert!(z.is_pointed());
        assert_eq!(z.face_lattice().len(), 1);
    }

    #[test]
    fn parents_are_covers() {
        let c = RationalCone::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let l = c.face_lattice();
        assert_eq!(l.f_vector(), vec![1, 3, 3, 1]);
        assert_eq!(l.face(0).parents.len(), 3);
        for f in l.faces() {
            for &p in &f.parents {
                assert_eq!(l.face(p).dim, f.dim + 1);
            }
        }
    }

    #[test]
    fn face_lattice_json() {
        let c = RationalCone::new(1, vec![vec![1]]).unwrap();
        let s = serde_json::to_string(c.face_lattice()).unwrap();
        assert_eq!(s, r#"{"faces":[{"dim":0,"generators":[],"parents":[1]},{"dim":1,"generators":[0],"parents":[]}]}"#);
    }
}
