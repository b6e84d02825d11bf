//! Bounded search for degenerate faces.
//!
//! f is degenerate along a face Γ ∌ 0 of Δ when the partials of
//! f_Γ = Σ_{w_j ∈ Γ} a_j t^{w_j} share a zero on the torus. On the torus this
//! is the same as a common zero of `t_i ∂f_Γ/∂t_i = Σ_j w_ij a_j t^{w_j}`.
//! Only points over k_1, …, k_{m_max} are searched, so the absence of a
//! witness is evidence rather than proof.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::field::FiniteField;
use crate::arith::tower::FieldTower;
use crate::error::{Error, Result};
use crate::lattice::ExponentMatrix;
use crate::sums::check_budget;

/// A common zero of all partials of f_Γ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Extension degree of the field containing the point.
    pub degree: u32,
    /// Coordinates as elements of k_m.
    pub point: Vec<u64>,
}

/// Search result for one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceVerdict {
    pub face_id: usize,
    pub dim: usize,
    /// Columns of `A` lying on the face.
    pub columns: Vec<usize>,
    pub witness: Option<Witness>,
}

/// Outcome of [`nondegenerate_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NondegeneracyReport {
    pub nondegenerate: bool,
    /// Largest extension degree searched.
    pub m_max: u32,
    pub faces: Vec<FaceVerdict>,
    pub scope: String,
}

/// Faces of Δ not containing the origin, with the columns on each.
pub(crate) fn faces_avoiding_origin(a: &ExponentMatrix) -> Vec<(usize, usize, Vec<usize>)> {
    let delta = a.newton_polytope();
    let points = delta.points();
    let col_point: Vec<usize> =
        a.columns().iter().map(|w| points.iter().position(|p| p == w).expect("column is a hull point")).collect();
    let lattice = delta.face_lattice();
    (0..lattice.len())
        .filter(|&i| !lattice.face(i).contains_member(0))
        .map(|i| {
            let face = lattice.face(i);
            let cols = (0..a.ncols()).filter(|&j| face.contains_member(col_point[j])).collect();
            (i, face.dim, cols)
        })
        .collect()
}

fn search_face(tower: &FieldTower, a: &ExponentMatrix, coeffs: &[u64], cols: &[usize], budget: u128) -> Result<Option<Vec<u64>>> {
    let ext: &FiniteField = tower.ext();
    let n = a.n();
    let total = check_budget(ext, n, budget)?;
    let q1 = ext.unit_order() as u128;
    // coefficient w_ij a_j of t^{w_j} in the i-th Euler derivative
    let terms: Vec<(Vec<i64>, Vec<u64>)> = cols
        .iter()
        .map(|&j| {
            let w = a.column(j).to_vec();
            let c = (0..n).map(|i| ext.mul(ext.from_int(w[i]), coeffs[j])).collect();
            (w, c)
        })
        .collect();
    let found = (0..total).into_par_iter().find_first(|idx| {
        let mut rest = *idx;
        let mut logs = vec![0i64; n];
        for l in logs.iter_mut().rev() {
            *l = (rest % q1) as i64;
            rest /= q1;
        }
        (0..n).all(|i| {
            terms.iter().fold(0, |acc, (w, c)| {
                let e: i64 = w.iter().zip(&logs).map(|(x, y)| x * y).sum();
                ext.add(acc, ext.mul(c[i], ext.exp(e)))
            }) == 0
        })
    });
    Ok(found.map(|idx| {
        let mut rest = idx;
        let mut pt = vec![0u64; n];
        for v in pt.iter_mut().rev() {
            *v = ext.exp((rest % q1) as i64);
            rest /= q1;
        }
        pt
    }))
}

/// Searches `(k_m^*)^n`, `m = 1..=m_max`, for a witness of degeneracy on each face Γ ∌ 0.
pub fn nondegenerate_check(
    base: &Arc<FiniteField>,
    a: &ExponentMatrix,
    coeffs: &[u64],
    m_max: u32,
    budget: u128,
) -> Result<NondegeneracyReport> {
    if coeffs.len() != a.ncols() {
        return Err(Error::DimensionMismatch(format!("{} coefficients, N = {}", coeffs.len(), a.ncols())));
    }
    if let Some(bad) = coeffs.iter().find(|c| !base.contains(**c)) {
        return Err(Error::NotAnElement(*bad));
    }
    let mut faces: Vec<FaceVerdict> = faces_avoiding_origin(a)
        .into_iter()
        .map(|(face_id, dim, columns)| FaceVerdict { face_id, dim, columns, witness: None })
        .collect();
    for m in 1..=m_max {
        let tower = FieldTower::new(base.clone(), m)?;
        let lifted = coeffs.iter().map(|c| tower.embed(*c)).collect::<Result<Vec<_>>>()?;
        for f in faces.iter_mut().filter(|f| f.witness.is_none()) {
            if let Some(point) = search_face(&tower, a, &lifted, &f.columns, budget)? {
                f.witness = Some(Witness { degree: m, point });
            }
        }
    }
    let nondegenerate = faces.iter().all(|f| f.witness.is_none());
    let scope = if nondegenerate {
        format!("no common zero over k_m for m ≤ {m_max}; not a proof over the algebraic closure")
    } else {
        "witness found: degenerate".to_string()
    };
    Ok(NondegeneracyReport { nondegenerate, m_max, faces, scope })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(p, 1, None).unwrap())
    }

    #[test]
    fn kloosterman_is_nondegenerate() {
        let a = ExponentMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        let r = nondegenerate_check(&field(3), &a, &[1, 1], 3, u128::MAX).unwrap();
        assert!(r.nondegenerate);
        assert_eq!(r.faces.len(), 2);
        assert!(r.faces.iter().all(|f| f.dim == 0 && f.columns.len() == 1));
    }

    #[test]
    fn degenerate_edge_has_witness() {
        let a = ExponentMatrix::from_rows(vec![vec![2, 1, 0], vec![0, 1, 2]]).unwrap();
        let r = nondegenerate_check(&field(5), &a, &[1, 2, 1], 2, u128::MAX).unwrap();
        assert!(!r.nondegenerate);
        let bad: Vec<&FaceVerdict> = r.faces.iter().filter(|f| f.witness.is_some()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].columns, vec![0, 1, 2]);
        let w = bad[0].witness.as_ref().unwrap();
        assert_eq!(w.degree, 1);
        // t_1 + t_2 = 0
        assert_eq!((w.point[0] + w.point[1]) % 5, 0);
        let good = nondegenerate_check(&field(5), &a, &[1, 1, 1], 2, u128::MAX).unwrap();
        assert!(good.nondegenerate);
    }

    #[test]
    fn zero_coefficient_on_a_vertex_is_degenerate() {
        let a = ExponentMatrix::from_rows(vec![vec![1, 2]]).unwrap();
        let r = nondegenerate_check(&field(5), &a, &[1, 0], 1, u128::MAX).unwrap();
        assert!(!r.nondegenerate);
        let r = nondegenerate_check(&field(5), &a, &[0, 1], 1, u128::MAX).unwrap();
        assert!(r.nondegenerate);
    }
}
