use std::collections::BTreeSet;

use serde::Serialize;

use super::markov::PressureEstimate;
use super::measure::{CylinderMeasure, Estimate};
use crate::potential::Potential;
use crate::{Error, Result};

/// Largest deviation of `x` from a value carrying log radius `r`.
fn deviation(value: f64, r: f64) -> f64 {
    if value == 0.0 || r == 0.0 {
        0.0
    } else {
        value * r.exp_m1()
    }
}

/// Weak distance `D(μ, ν) = Σ_{j>=0} 2^{-(j+1)} Σ_{|a|=j+1} |μ[a] - ν[a]|`,
/// truncated after `j = k`.
///
/// The value is the truncated sum. The bracket widens it by the measures'
/// radii, and the upper end adds `2^{-k}` for the omitted levels, each of
/// which contributes at most `2 · 2^{-(j+1)}`.
pub fn weak_distance(mu: &CylinderMeasure, nu: &CylinderMeasure, k: usize) -> Result<Estimate> {
    for m in [mu, nu] {
        if m.depth() < k + 1 {
            return Err(Error::DepthMismatch {
                required: k + 1,
                available: m.depth(),
            });
        }
    }
    let mut value = 0.0;
    let mut lo = 0.0;
    let mut hi = 0.0;
    for j in 0..=k {
        let len = j + 1;
        let (lm, ln) = (mu.level(len).expect("depth"), nu.level(len).expect("depth"));
        let words: BTreeSet<_> = lm.keys().chain(ln.keys()).collect();
        let mut level = 0.0;
        let mut slack = 0.0;
        for w in words {
            let a = mu.cell(w).expect("covered");
            let b = nu.cell(w).expect("covered");
            level += (a.value - b.value).abs();
            slack += deviation(a.value, a.log_radius) + deviation(b.value, b.log_radius);
        }
        let weight = 0.5f64.powi(len as i32);
        value += weight * level;
        lo += weight * (level - slack).max(0.0);
        hi += weight * (level + slack).min(2.0);
    }
    Ok(Estimate {
        value,
        lo,
        hi: hi + 0.5f64.powi(k as i32),
    })
}

/// Extremes of the Gibbs ratio `μ[a] / exp(S_kφ(a*) - (k+1)P)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCertificate {
    pub min: f64,
    pub max: f64,
    /// Both extremes are exact up to a factor `exp(±log_radius)`.
    pub log_radius: f64,
}

/// Gibbs-ratio extremes over all words `a` of lengths `1..=big_n + 1`
/// charged by `μ`, where `a*` maximizes `S_kφ` over `[a]` (`k = |a| - 1`).
/// Finite positive extremes certify the Gibbs inequality up to this depth.
pub fn gibbs_ratio_certificate(
    mu: &CylinderMeasure,
    phi: &Potential,
    pressure: &PressureEstimate,
    big_n: usize,
) -> Result<RatioCertificate> {
    if mu.depth() < big_n + 1 {
        return Err(Error::DepthMismatch {
            required: big_n + 1,
            available: mu.depth(),
        });
    }
    let mut out = RatioCertificate {
        min: f64::INFINITY,
        max: 0.0,
        log_radius: 0.0,
    };
    for len in 1..=big_n + 1 {
        for (a, c) in mu.level(len).expect("depth") {
            if c.value <= 0.0 {
                continue;
            }
            let s = phi.birkhoff_extremes(a).1;
            let log_ratio = c.value.ln() - s + len as f64 * pressure.value;
            let ratio = log_ratio.exp();
            out.min = out.min.min(ratio);
            out.max = out.max.max(ratio);
            out.log_radius = out.log_radius.max(c.log_radius + len as f64 * pressure.radius);
        }
    }
    Ok(out)
}
