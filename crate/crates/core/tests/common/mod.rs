//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's symbolic or transfer code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Golden ratio as the positive root of `x² - x - 1`, by bisection.
pub fn golden_root() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid - mid - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Spectral radius of a square matrix from its full complex spectrum.
pub fn spectral_radius(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// All words of length `len` over `size` symbols.
pub fn all_words(size: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..size).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Golden mean language: no `11`.
pub fn golden_ok(w: &[u8]) -> bool {
    !w.windows(2).any(|p| p == [1, 1])
}

/// Even shift language: every maximal run of zeros bounded by ones on both
/// sides has even length.
pub fn even_ok(w: &[u8]) -> bool {
    let ones: Vec<usize> = (0..w.len()).filter(|&i| w[i] == 1).collect();
    ones.windows(2).all(|z| (z[1] - z[0] - 1) % 2 == 0)
}

/// Words of length `len` of the finite-type approximation of order `m`
/// of the language `ok`: every window of length `m + 1` is in the language.
pub fn approx_words(ok: &dyn Fn(&[u8]) -> bool, size: u8, m: usize, len: usize) -> Vec<Vec<u8>> {
    all_words(size, len)
        .into_iter()
        .filter(|w| {
            if w.len() <= m + 1 {
                ok(w)
            } else {
                w.windows(m + 1).all(ok)
            }
        })
        .collect()
}

/// Pressure of a range-`r` potential `phi` on the approximation of order
/// `m`, from the weighted higher-block matrix on words of length
/// `L = max(m, r - 1, 1)`.
pub fn approx_pressure(
    ok: &dyn Fn(&[u8]) -> bool,
    size: u8,
    m: usize,
    r: usize,
    phi: &dyn Fn(&[u8]) -> f64,
) -> f64 {
    let l = m.max(r.saturating_sub(1)).max(1);
    let states = approx_words(ok, size, m, l);
    let long: std::collections::HashSet<Vec<u8>> =
        approx_words(ok, size, m, l + 1).into_iter().collect();
    let n = states.len();
    let mut rows = vec![vec![0.0; n]; n];
    for (i, u) in states.iter().enumerate() {
        for (j, v) in states.iter().enumerate() {
            if u[1..] == v[..l - 1] {
                let mut w = u.clone();
                w.push(v[l - 1]);
                if long.contains(&w) {
                    rows[i][j] = phi(&w[..r]).exp();
                }
            }
        }
    }
    spectral_radius(&rows).ln()
}

/// Exact `M^k x` over the integers.
pub fn exact_power(m: &[Vec<u32>], x: &[u32], k: usize) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
    for _ in 0..k {
        v = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v)
                    .filter(|(a, _)| **a != 0)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + BigInt::from(*a) * b)
            })
            .collect();
    }
    v
}

/// Natural logarithm of a positive big integer.
pub fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 900;
    let top: BigInt = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}
