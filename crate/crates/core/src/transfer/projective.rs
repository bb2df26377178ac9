use rayon::prelude::*;

use super::matrix::DenseMatrix;
use crate::{Error, Result};

/// Projective (Hilbert) distance `log max_i x_i/y_i - log min_i x_i/y_i`
/// between two strictly positive vectors.
pub fn projective_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::NonPositiveEntry { index: i });
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::NonPositiveEntry { index: i });
        }
        let r = a.ln() - b.ln();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if x.is_empty() {
        return Ok(0.0);
    }
    Ok((hi - lo).max(0.0))
}

/// Birkhoff coefficient of a nonnegative matrix.
///
/// `Γ` is the square root of the smallest cross ratio
/// `M_ij M_kl / (M_il M_kj)`, or `0` when an entry vanishes, and
/// `τ = (1 - Γ) / (1 + Γ)`. The cross ratios are evaluated in log space in
/// `O(n³)` operations.
pub fn gamma_tau(m: &DenseMatrix) -> (f64, f64) {
    let n = m.dim();
    if n == 0 {
        return (1.0, 0.0);
    }
    if !m.is_positive() {
        return (0.0, 1.0);
    }
    let logs: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().map(|v| v.ln()).collect()).collect();
    // Largest spread max_j - min_j of log(M_ij / M_kj) over row pairs.
    let spread = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst: f64 = 0.0;
            for k in (i + 1)..n {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for (a, b) in logs[i].iter().zip(&logs[k]) {
                    let r = a - b;
                    lo = lo.min(r);
                    hi = hi.max(r);
                }
                worst = worst.max(hi - lo);
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    let gamma = (-spread / 2.0).exp();
    (gamma, (1.0 - gamma) / (1.0 + gamma))
}
