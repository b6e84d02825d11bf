//! Factoring characters through face tori and the non-resonance condition.
//!
//! For a face τ with saturated lattice `M_τ` (basis rows `u_1, …, u_r`), the
//! projection `p_τ` sends `t` to `(t^{u_1}, …, t^{u_r})`. The character named
//! by `c` factors through `p_τ` exactly when `c ≡ d·B (mod q − 1)` for some
//! `d`, and then `χ_τ` is named by `d`.

use serde::Serialize;

use crate::arith::characters::CharacterSpec;
use crate::arith::field::inv_mod_general;
use crate::lattice::{RationalCone, Sublattice};
use crate::lattice::ops::span_lattice;

/// Outcome of [`factor_through_face`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    pub factors: bool,
    /// Descended character in coordinates of `basis`.
    pub chi_tau: Option<Vec<u64>>,
    /// Basis of `M_τ` used for the descent.
    pub basis: Vec<Vec<i64>>,
}

impl FactorizationResult {
    pub fn descended(&self, order: u64) -> Option<CharacterSpec> {
        self.chi_tau
            .as_ref()
            .map(|d| CharacterSpec::new(&d.iter().map(|x| *x as i64).collect::<Vec<_>>(), order))
    }
}

/// Solves `d·B ≡ c (mod q − 1)`.
pub fn factor_through_face(chi: &CharacterSpec, lattice: &Sublattice) -> FactorizationResult {
    let order = chi.order();
    let basis = lattice.basis().to_vec();
    let r = lattice.rank();
    let c: Vec<i64> = chi.exponents().iter().map(|x| *x as i64).collect();
    let fail = FactorizationResult { factors: false, chi_tau: None, basis: basis.clone() };
    if r == 0 {
        return if chi.is_trivial() {
            FactorizationResult { factors: true, chi_tau: Some(Vec::new()), basis }
        } else {
            fail
        };
    }
    let snf = lattice.basis_matrix().smith_normal_form();
    // d·B = c ⇔ z·D = c·V with z = d·U^{-1}
    let cv = snf.v.left_apply(&c);
    let q = order as i64;
    let mut z = vec![0i64; r];
    for (i, x) in cv.iter().enumerate() {
        let x = x.rem_euclid(q);
        if i < r {
            let di = snf.divisors[i].rem_euclid(q);
            let g = num_integer::gcd(di, q);
            if x % g != 0 {
                return fail;
            }
            let m = q / g;
            let inv = if m == 1 { 0 } else { inv_mod_general((di / g) as u64, m as u64).expect("coprime") as i64 };
            z[i] = ((x / g) % m) * inv % m;
        } else if x != 0 {
            return fail;
        }
    }
    let d = snf.u.left_apply(&z);
    FactorizationResult { factors: true, chi_tau: Some(d.iter().map(|x| x.rem_euclid(q) as u64).collect()), basis }
}

/// Generators of `ker p_τ(k) = {a : a·u ≡ 0 (mod q − 1) ∀u ∈ M_τ}`, as exponent vectors.
pub fn kernel_generators(lattice: &Sublattice, q: u64) -> Vec<Vec<u64>> {
    let n = lattice.ambient_dim();
    let order = (q - 1) as i64;
    let r = lattice.rank();
    let reduce = |v: Vec<i64>| -> Vec<u64> { v.into_iter().map(|x| x.rem_euclid(order) as u64).collect() };
    if r == 0 {
        return (0..n)
            .map(|k| {
                let mut e = vec![0; n];
                e[k] = 1;
                reduce(e)
            })
            .collect();
    }
    let snf = lattice.basis_matrix().smith_normal_form();
    let mut gens: Vec<Vec<u64>> = (0..n)
        .map(|k| {
            let scale = if k < r { order / num_integer::gcd(snf.divisors[k], order) } else { 1 };
            reduce(snf.v.column(k).into_iter().map(|x| x * scale).collect())
        })
        .collect();
    gens.retain(|g| g.iter().any(|x| *x != 0));
    gens
}

/// Verdict on one face in a non-resonance test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceEvidence {
    pub face_id: usize,
    pub dim: usize,
    pub factors: bool,
    pub chi_tau: Option<Vec<u64>>,
}

/// Result of [`nonresonant`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonresonanceReport {
    pub nonresonant: bool,
    /// Per codimension-one face.
    pub evidence: Vec<FaceEvidence>,
    /// Same verdict recomputed over every proper face.
    pub all_faces_agree: bool,
}

fn evidence(chi: &CharacterSpec, cone: &RationalCone, faces: &[usize]) -> Vec<FaceEvidence> {
    faces
        .iter()
        .map(|&i| {
            let f = factor_through_face(chi, &span_lattice(cone, i));
            FaceEvidence { face_id: i, dim: cone.face_lattice().face(i).dim, factors: f.factors, chi_tau: f.chi_tau }
        })
        .collect()
}

/// χ is non-resonant if it factors through no proper face of δ.
pub fn nonresonant(chi: &CharacterSpec, cone: &RationalCone) -> NonresonanceReport {
    let codim_one = evidence(chi, cone, &cone.codim_one_faces());
    let verdict = codim_one.iter().all(|e| !e.factors);
    let all = evidence(chi, cone, &cone.proper_faces());
    let all_verdict = all.iter().all(|e| !e.factors);
    NonresonanceReport { nonresonant: verdict, evidence: codim_one, all_faces_agree: verdict == all_verdict }
}
