//! Simultaneous polynomial root finding by the Aberth–Ehrlich iteration.

use crate::error::{Error, Result};
use crate::scalar::{Complex, RealScalar};

/// An approximate root with an inclusion radius.
#[derive(Clone, Debug)]
pub struct ApproxRoot<R> {
    pub z: Complex<R>,
    /// A disk of this radius around `z` contains a root.
    pub radius: f64,
}

/// `(p(z), p'(z))` by Horner's rule; `coeffs` low to high.
fn eval_with_derivative<R: RealScalar>(coeffs: &[Complex<R>], z: &Complex<R>, bits: usize) -> (Complex<R>, Complex<R>) {
    let mut p = Complex::zero(bits);
    let mut dp = Complex::zero(bits);
    for c in coeffs.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + c.clone();
    }
    (p, dp)
}

/// All roots of the polynomial with the given coefficients (low to high, nonzero leading term).
pub fn aberth<R: RealScalar>(coeffs: &[Complex<R>], bits: usize) -> Result<Vec<ApproxRoot<R>>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d].abs().to_f64();
    // Fujiwara-type bound on root size
    let radius = (1..=d)
        .map(|k| (coeffs[d - k].abs().to_f64() / lead).powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let two_pi = R::pi(bits) * R::from_f64(2.0, bits);
    let mut z: Vec<Complex<R>> = (0..d)
        .map(|k| {
            let angle = two_pi.clone() * R::from_f64(k as f64 / d as f64, bits) + R::from_f64(0.4, bits);
            let (s, c) = angle.sin_cos();
            Complex::new(c, s).scale(&R::from_f64(radius, bits))
        })
        .collect();
    let eps = R::pow2(-(bits as i32 - 8), bits);
    let max_iter = 40 + 4 * bits;
    for _ in 0..max_iter {
        let mut done = true;
        for k in 0..d {
            let (p, dp) = eval_with_derivative(&coeffs, &z[k], bits);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex::zero(bits);
            for j in (0..d).filter(|&j| j != k) {
                let diff = z[k].clone() - z[j].clone();
                if !diff.is_zero() {
                    s = s + Complex::one(bits) / diff;
                }
            }
            let w = ratio.clone() / (Complex::one(bits) - ratio * s);
            let scale = if z[k].abs() > R::one(bits) { z[k].abs() } else { R::one(bits) };
            if w.abs() > eps.clone() * scale {
                done = false;
            }
            z[k] = z[k].clone() - w;
        }
        if done {
            break;
        }
    }
    let roots: Vec<ApproxRoot<R>> = z
        .into_iter()
        .map(|zk| {
            let (p, dp) = eval_with_derivative(&coeffs, &zk, bits);
            let radius = if p.is_zero() {
                0.0
            } else if dp.is_zero() {
                f64::INFINITY
            } else {
                d as f64 * (p / dp).abs().to_f64()
            };
            ApproxRoot { z: zk, radius }
        })
        .collect();
    if roots.iter().any(|r| !r.radius.is_finite()) {
        return Err(Error::InvalidInput("root iteration did not converge".into()));
    }
    Ok(roots)
}
