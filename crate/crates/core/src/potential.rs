//! Locally constant potentials with declared variation bounds.
//!
//! A [`Potential`] is a table over the words of length `r` (its range)
//! together with a declared bound on the variations `var_m`. The declared
//! bound feeds the proof constants, while error radii use the exact
//! variations of the table, which are never larger.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::symbolic::{Alphabet, Symbol, Word};
use crate::{Error, Result};

/// Number of explicit terms in the zeta-function bound before the integral
/// tail takes over.
const ZETA_TERMS: usize = 10_000;
/// Largest number of window continuations enumerated when extremizing
/// Birkhoff sums over a cylinder.
const EXTENSION_LIMIT: usize = 1 << 16;
/// Relative slack allowed when checking declared variation bounds.
const BOUND_SLACK: f64 = 1e-12;

/// Declared bound on the variations `var_m = sup{|φ(x) - φ(y)| : x(0:m-1) =
/// y(0:m-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Variation {
    /// `var_m <= C θ^m`.
    #[serde(rename = "exp")]
    Exponential {
        #[serde(rename = "C")]
        c: f64,
        theta: f64,
    },
    /// `var_m <= C max(m, 1)^{-α}` with `α > 4`.
    #[serde(rename = "poly")]
    Polynomial {
        #[serde(rename = "C")]
        c: f64,
        alpha: f64,
    },
}

impl Variation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Variation::Exponential { c, theta } => {
                if !(c >= 0.0 && c.is_finite()) || !(0.0..1.0).contains(&theta) {
                    return Err(Error::InvalidPotential(format!(
                        "exponential variation needs C >= 0 and theta in [0,1), got C={c}, theta={theta}"
                    )));
                }
            }
            Variation::Polynomial { c, alpha } => {
                if !(c >= 0.0 && c.is_finite()) || !(alpha > 4.0 && alpha.is_finite()) {
                    return Err(Error::InvalidPotential(format!(
                        "polynomial variation needs C >= 0 and alpha > 4, got C={c}, alpha={alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Declared bound on `var_m`.
    pub fn bound(&self, m: usize) -> f64 {
        match *self {
            Variation::Exponential { c, theta } => c * theta.powi(m as i32),
            Variation::Polynomial { c, alpha } => c * (m.max(1) as f64).powf(-alpha),
        }
    }

    /// Certified upper bound on `Λ = Σ_{m >= 0} var_m` from the declared
    /// bound.
    pub fn lambda(&self) -> f64 {
        self.tail(0)
    }

    /// Certified upper bound on `Σ_{m >= j} var_m` from the declared bound.
    pub fn tail(&self, j: usize) -> f64 {
        match *self {
            Variation::Exponential { c, theta } => c * theta.powi(j as i32) / (1.0 - theta),
            Variation::Polynomial { c, alpha } => {
                // var_0 and var_1 share the bound C; afterwards sum explicitly
                // and close with the integral tail.
                let start = j.max(1);
                let mut sum = if j == 0 { c } else { 0.0 };
                let stop = start + ZETA_TERMS;
                for m in start..stop {
                    sum += c * (m as f64).powf(-alpha);
                }
                sum + c * (stop as f64 - 1.0).powf(1.0 - alpha) / (alpha - 1.0)
            }
        }
    }

    pub fn c(&self) -> f64 {
        match *self {
            Variation::Exponential { c, .. } | Variation::Polynomial { c, .. } => c,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Variation::Exponential { theta, .. } => Some(theta),
            Variation::Polynomial { .. } => None,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Variation::Polynomial { alpha, .. } => Some(alpha),
            Variation::Exponential { .. } => None,
        }
    }
}

/// Constants derived from a potential and used throughout the error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// `‖φ‖`, the sup norm of the table.
    pub norm: f64,
    /// Declared `Λ = Σ var_m`.
    pub lambda: f64,
    /// Exact `Σ var_m` of the table.
    pub exact_lambda: f64,
    /// Declared constant `C`.
    pub c: f64,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
}

/// Potential depending on the first `range` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    alphabet: Alphabet,
    range: usize,
    variation: Variation,
    /// `extremes[j]` holds `(min, max)` of the table over continuations of
    /// each word of length `j`, indexed in base `#A`. `extremes[range]` is
    /// the table itself.
    extremes: Vec<Vec<(f64, f64)>>,
    /// Exact `var_j` for `j < range`.
    exact_var: Vec<f64>,
    id: String,
}

/// A point on which Birkhoff sums are evaluated.
#[derive(Debug, Clone, Copy)]
pub enum Sequence<'a> {
    /// The periodic point `block^∞`.
    Periodic(&'a [Symbol]),
    /// A finite word that must determine every coordinate used.
    Finite(&'a [Symbol]),
}

fn code(word: &[Symbol], size: usize) -> usize {
    word.iter().fold(0usize, |acc, &s| acc * size + s as usize)
}

impl Potential {
    /// Builds a potential of range `range` from a table indexed in base `#A`
    /// (lexicographic order of the words of length `range`).
    pub fn from_table(
        alphabet: Alphabet,
        range: usize,
        table: Vec<f64>,
        variation: Variation,
    ) -> Result<Self> {
        variation.validate()?;
        if range == 0 {
            return Err(Error::InvalidPotential("range must be at least 1".into()));
        }
        let size = alphabet.len();
        let expected = size
            .checked_pow(range as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::InvalidPotential(format!("range {range} is too large")))?;
        if table.len() != expected {
            return Err(Error::InvalidPotential(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(i) = table.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!("table entry {i} is not finite")));
        }
        let mut extremes = vec![Vec::new(); range + 1];
        extremes[range] = table.iter().map(|&v| (v, v)).collect();
        for j in (0..range).rev() {
            extremes[j] = extremes[j + 1]
                .chunks(size)
                .map(|c| {
                    c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &(lo, hi)| {
                        (acc.0.min(lo), acc.1.max(hi))
                    })
                })
                .collect();
        }
        let exact_var: Vec<f64> = (0..range)
            .map(|j| {
                extremes[j]
                    .iter()
                    .map(|&(lo, hi)| hi - lo)
                    .fold(0.0, f64::max)
            })
            .collect();
        for (j, &v) in exact_var.iter().enumerate() {
            let declared = variation.bound(j);
            if v > declared + BOUND_SLACK * (1.0 + v.abs()) {
                return Err(Error::InvalidPotential(format!(
                    "declared variation bound {declared:e} at depth {j} is below the table's variation {v:e}"
                )));
            }
        }
        let mut hasher = Sha256::new();
        hasher.update((range as u64).to_le_bytes());
        for v in &table {
            hasher.update(v.to_le_bytes());
        }
        let id = hex::encode(&hasher.finalize()[..8]);
        Ok(Self {
            alphabet,
            range,
            variation,
            extremes,
            exact_var,
            id,
        })
    }

    /// Builds a potential by evaluating `f` on every word of length `range`.
    pub fn from_fn(
        alphabet: Alphabet,
        range: usize,
        variation: Variation,
        f: impl Fn(&[Symbol]) -> f64,
    ) -> Result<Self> {
        let table = Word::all(alphabet.len(), range).iter().map(|w| f(w)).collect();
        Self::from_table(alphabet, range, table, variation)
    }

    /// The potential `φ ≡ 0`.
    pub fn zero(alphabet: Alphabet) -> Self {
        Self::constant(alphabet, 0.0)
    }

    /// The constant potential `φ ≡ c`.
    pub fn constant(alphabet: Alphabet, c: f64) -> Self {
        let n = alphabet.len();
        Self::from_table(
            alphabet,
            1,
            vec![c; n],
            Variation::Exponential { c: 0.0, theta: 0.0 },
        )
        .expect("constant potential is valid")
    }

    /// `φ(x) = log p_{x(0)}`. With probabilities summing to one the
    /// equilibrium state on the full shift is the Bernoulli measure and the
    /// pressure is zero.
    pub fn bernoulli(alphabet: Alphabet, probs: &[f64]) -> Result<Self> {
        if probs.len() != alphabet.len() || probs.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::InvalidPotential(
                "bernoulli weights must be positive, one per symbol".into(),
            ));
        }
        let table: Vec<f64> = probs.iter().map(|p| p.ln()).collect();
        let spread = table.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - table.iter().cloned().fold(f64::INFINITY, f64::min);
        Self::from_table(
            alphabet,
            1,
            table,
            Variation::Exponential {
                c: spread,
                theta: 0.0,
            },
        )
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of coordinates the potential depends on.
    pub fn range(&self) -> usize {
        self.range
    }

    pub fn variation(&self) -> &Variation {
        &self.variation
    }

    /// Short content hash identifying the table.
    pub fn id(&self) -> &str {
        &self.id
    }

    /// The table over words of length `range`, in lexicographic order.
    pub fn table(&self) -> Vec<f64> {
        self.extremes[self.range].iter().map(|e| e.0).collect()
    }

    /// `‖φ‖ = max |φ|`.
    pub fn norm(&self) -> f64 {
        self.extremes[0][0].0.abs().max(self.extremes[0][0].1.abs())
    }

    /// Declared `Λ`.
    pub fn declared_lambda(&self) -> f64 {
        self.variation.lambda()
    }

    /// Exact `var_j` of the table.
    pub fn exact_variation(&self, j: usize) -> f64 {
        self.exact_var.get(j).copied().unwrap_or(0.0)
    }

    /// Exact `Σ_{i >= j} var_i` of the table.
    pub fn tail_sum(&self, j: usize) -> f64 {
        self.exact_var.iter().skip(j).sum()
    }

    pub fn derived_constants(&self) -> DerivedConstants {
        DerivedConstants {
            norm: self.norm(),
            lambda: self.declared_lambda(),
            exact_lambda: self.tail_sum(0),
            c: self.variation.c(),
            theta: self.variation.theta(),
            alpha: self.variation.alpha(),
        }
    }

    /// Whether `φ^n` coincides with `φ` on every cylinder of length `n + 1`.
    pub fn is_exact_at(&self, n: usize) -> bool {
        n + 1 >= self.range
    }

    /// `φ^n(a) = max{φ(x) : x ∈ [a]}` for a word `a` of length `n + 1`.
    pub fn finite_range(&self, n: usize, a: &[Symbol]) -> Result<f64> {
        if a.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                left: a.len(),
                right: n + 1,
            });
        }
        self.alphabet.validate(a)?;
        Ok(self.max_over(a))
    }

    /// `(min, max)` of `φ` over the cylinder `[a]`.
    pub fn cylinder_extremes(&self, a: &[Symbol]) -> (f64, f64) {
        let len = a.len().min(self.range);
        self.extremes[len][code(&a[..len], self.alphabet.len())]
    }

    fn max_over(&self, a: &[Symbol]) -> f64 {
        self.cylinder_extremes(a).1
    }

    /// `φ(x)` for a word determining the first `range` coordinates.
    pub fn value(&self, x: &[Symbol]) -> Result<f64> {
        if x.len() < self.range {
            return Err(Error::InsufficientContext {
                needed: self.range,
                available: x.len(),
            });
        }
        self.alphabet.validate(&x[..self.range])?;
        Ok(self.max_over(&x[..self.range]))
    }

    /// `S_kφ(x) = Σ_{i=0}^{k} φ(T^i x)`.
    pub fn birkhoff_sum(&self, x: Sequence<'_>, k: usize) -> Result<f64> {
        match x {
            Sequence::Periodic(block) => {
                if block.is_empty() {
                    return Err(Error::InsufficientContext {
                        needed: 1,
                        available: 0,
                    });
                }
                self.alphabet.validate(block)?;
                let len = block.len();
                let mut window = vec![0; self.range];
                let mut sum = 0.0;
                for i in 0..=k {
                    for (j, w) in window.iter_mut().enumerate() {
                        *w = block[(i + j) % len];
                    }
                    sum += self.max_over(&window);
                }
                Ok(sum)
            }
            Sequence::Finite(word) => {
                let needed = k + self.range;
                if word.len() < needed {
                    return Err(Error::InsufficientContext {
                        needed,
                        available: word.len(),
                    });
                }
                self.alphabet.validate(&word[..needed])?;
                Ok((0..=k).map(|i| self.max_over(&word[i..i + self.range])).sum())
            }
        }
    }

    /// `(min, max)` of `S_kφ` over the cylinder `[b]`, where `k = |b| - 1`.
    ///
    /// Exact when the `#A^{r-1}` continuations can be enumerated; otherwise
    /// each term is extremized separately, which still gives valid bounds.
    pub fn birkhoff_extremes(&self, b: &[Symbol]) -> (f64, f64) {
        let size = self.alphabet.len();
        let free = self.range - 1;
        let count = size.checked_pow(free as u32).filter(|&c| c <= EXTENSION_LIMIT);
        match count {
            Some(count) => {
                let mut word = b.to_vec();
                word.resize(b.len() + free, 0);
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for e in 0..count {
                    let mut rest = e;
                    for j in (0..free).rev() {
                        word[b.len() + j] = (rest % size) as Symbol;
                        rest /= size;
                    }
                    let s: f64 = (0..b.len())
                        .map(|i| self.max_over(&word[i..i + self.range]))
                        .sum();
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                (lo, hi)
            }
            None => (0..b.len()).fold((0.0, 0.0), |acc, i| {
                let (lo, hi) = self.cylinder_extremes(&b[i..]);
                (acc.0 + lo, acc.1 + hi)
            }),
        }
    }
}

/// `φ^n(a)`; see [`Potential::finite_range`].
pub fn finite_range(phi: &Potential, n: usize, a: &[Symbol]) -> Result<f64> {
    phi.finite_range(n, a)
}

/// `S_kφ(x)`; see [`Potential::birkhoff_sum`].
pub fn birkhoff_sum(phi: &Potential, x: Sequence<'_>, k: usize) -> Result<f64> {
    phi.birkhoff_sum(x, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern() -> Potential {
        Potential::bernoulli(Alphabet::binary(), &[1.0 / 3.0, 2.0 / 3.0]).unwrap()
    }

    /// Range-`r` truncation of `Σ_k 2^{-k} x(k)`.
    fn geometric(r: usize) -> Potential {
        Potential::from_fn(
            Alphabet::binary(),
            r,
            Variation::Exponential { c: 2.0, theta: 0.5 },
            |w| w.iter().enumerate().map(|(k, &s)| s as f64 * 0.5f64.powi(k as i32)).sum(),
        )
        .unwrap()
    }

    #[test]
    fn zero_potential() {
        let phi = Potential::zero(Alphabet::binary());
        assert_eq!(phi.finite_range(3, &[0, 1, 1, 0]).unwrap(), 0.0);
        let c = phi.derived_constants();
        assert_eq!((c.norm, c.lambda), (0.0, 0.0));
    }

    #[test]
    fn bernoulli_depth_zero_is_exact() {
        assert_eq!(bern().finite_range(0, &[0]).unwrap(), (1.0f64 / 3.0).ln());
    }

    #[test]
    fn geometric_tail_is_maximized_by_ones() {
        let r = 16;
        let v = geometric(r).finite_range(1, &[0, 1]).unwrap();
        assert!((v - 1.0).abs() <= 0.5f64.powi(r as i32 - 1) + 1e-15);
    }

    #[test]
    fn birkhoff_sums() {
        let c = Potential::constant(Alphabet::binary(), 0.7);
        let s = c.birkhoff_sum(Sequence::Periodic(&[0, 1, 1]), 5).unwrap();
        assert!((s - 6.0 * 0.7).abs() < 1e-14);
        let b = bern();
        let s = b.birkhoff_sum(Sequence::Periodic(&[0, 1]), 3).unwrap();
        let expected = 2.0 * (1.0f64 / 3.0).ln() + 2.0 * (2.0f64 / 3.0).ln();
        assert!((s - expected).abs() < 1e-14);
        let s0 = b.birkhoff_sum(Sequence::Finite(&[1]), 0).unwrap();
        assert_eq!(s0, (2.0f64 / 3.0).ln());
    }

    #[test]
    fn short_finite_words_are_rejected() {
        let g = geometric(4);
        assert!(matches!(
            g.birkhoff_sum(Sequence::Finite(&[0, 1, 0]), 1),
            Err(Error::InsufficientContext { .. })
        ));
    }

    #[test]
    fn declared_lambdas() {
        let e = Variation::Exponential { c: 1.0, theta: 0.5 };
        assert_eq!(e.lambda(), 2.0);
        let p = Variation::Polynomial { c: 1.0, alpha: 5.0 };
        let zeta5 = 1.036_927_755_143_37;
        let lambda = p.lambda();
        assert!(lambda >= 1.0 + zeta5 - 1e-12);
        assert!(lambda <= 1.0 + zeta5 + 1e-12);
    }

    #[test]
    fn polynomial_needs_alpha_above_four() {
        let bad = Variation::Polynomial { c: 1.0, alpha: 3.0 };
        assert!(Potential::from_table(Alphabet::binary(), 1, vec![0.0, 0.0], bad).is_err());
    }

    #[test]
    fn understated_variation_is_rejected() {
        let err = Potential::from_table(
            Alphabet::binary(),
            1,
            vec![0.0, 1.0],
            Variation::Exponential { c: 0.5, theta: 0.5 },
        );
        assert!(matches!(err, Err(Error::InvalidPotential(_))));
    }

    #[test]
    fn exact_variations_of_truncated_geometric() {
        let g = geometric(6);
        for j in 0..6 {
            let expected: f64 = (j..6).map(|k| 0.5f64.powi(k as i32)).sum();
            assert!((g.exact_variation(j) - expected).abs() < 1e-14);
        }
        assert_eq!(g.exact_variation(6), 0.0);
    }

    #[test]
    fn birkhoff_extremes_enumerate_continuations() {
        let g = geometric(3);
        let (lo, hi) = g.birkhoff_extremes(&[1]);
        assert!((lo - 1.0).abs() < 1e-15);
        assert!((hi - 1.75).abs() < 1e-15);
    }
}
