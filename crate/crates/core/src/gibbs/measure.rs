use std::collections::BTreeMap;

use serde::Serialize;

use crate::symbolic::{Alphabet, Symbol, Word};
use crate::{Error, Result};

/// A real value with a certified enclosing interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            lo: value,
            hi: value,
        }
    }

    /// `value ± radius`.
    pub fn additive(value: f64, radius: f64) -> Self {
        Self {
            value,
            lo: value - radius,
            hi: value + radius,
        }
    }

    /// `value · exp(±log_radius)` for a nonnegative value.
    pub fn multiplicative(value: f64, log_radius: f64) -> Self {
        if value == 0.0 {
            return Self::exact(0.0);
        }
        Self {
            value,
            lo: value * (-log_radius).exp(),
            hi: value * log_radius.exp(),
        }
    }

    /// Half the width of the interval, or the larger one-sided distance when
    /// the interval is not centered.
    pub fn radius(&self) -> f64 {
        (self.hi - self.value).max(self.value - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Whether `lo <= value <= hi` holds and no bound is NaN.
    pub fn is_well_formed(&self) -> bool {
        self.lo <= self.value && self.value <= self.hi
    }

    /// Raises the lower end to `0` when the interval straddles `0`.
    pub fn clamp_nonnegative(self) -> Self {
        if self.hi < 0.0 {
            return self;
        }
        Self {
            value: self.value.max(0.0),
            lo: self.lo.max(0.0),
            hi: self.hi,
        }
    }
}

/// Mass of one cylinder together with its multiplicative error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub value: f64,
    /// The exact mass lies in `value · exp(±log_radius)`.
    pub log_radius: f64,
}

/// How a cylinder measure was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureProvenance {
    /// Order of the finite type approximation.
    pub m: usize,
    /// Transfer matrix depth, if one was used.
    pub n: Option<usize>,
    /// Period parameter, if periodic points were used.
    pub p: Option<usize>,
    pub method: String,
}

/// Masses of cylinders `[a]` for every word with `1 <= |a| <= depth`.
///
/// Words missing from a level carry mass zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderMeasure {
    alphabet: Alphabet,
    /// `levels[j]` holds the words of length `j + 1`.
    levels: Vec<BTreeMap<Word, Cell>>,
    provenance: MeasureProvenance,
}

/// Drops the last symbol of every word, adding masses. The radius of a sum is
/// the largest radius of its terms plus the rounding of the additions.
fn marginal(level: &BTreeMap<Word, Cell>) -> BTreeMap<Word, Cell> {
    let mut out: BTreeMap<Word, Cell> = BTreeMap::new();
    let mut terms: BTreeMap<Word, usize> = BTreeMap::new();
    for (w, c) in level {
        let key = Word::from(&w[..w.len() - 1]);
        let e = out.entry(key).or_insert(Cell {
            value: 0.0,
            log_radius: 0.0,
        });
        e.value += c.value;
        e.log_radius = e.log_radius.max(c.log_radius);
        *terms.entry(Word::from(&w[..w.len() - 1])).or_insert(0) += 1;
    }
    // Summing k positive terms adds a relative error below (k - 1)ε.
    for (w, c) in out.iter_mut() {
        c.log_radius += (terms[w] as f64) * f64::EPSILON;
    }
    out
}

impl CylinderMeasure {
    /// Builds a measure from its masses on words of one length `depth`, and
    /// fills in every shorter length by marginalization.
    pub fn from_top(
        alphabet: Alphabet,
        depth: usize,
        top: BTreeMap<Word, Cell>,
        provenance: MeasureProvenance,
    ) -> Result<Self> {
        Self::from_levels(alphabet, depth, vec![top], provenance)
    }

    /// Builds a measure from the masses on the lengths
    /// `depth - given.len() + 1 ..= depth` (last entry longest); shorter
    /// lengths are obtained by marginalization.
    pub fn from_levels(
        alphabet: Alphabet,
        depth: usize,
        given: Vec<BTreeMap<Word, Cell>>,
        provenance: MeasureProvenance,
    ) -> Result<Self> {
        if depth == 0 || given.is_empty() || given.len() > depth {
            return Err(Error::Config(format!(
                "a cylinder measure needs 1..={depth} levels, got {}",
                given.len()
            )));
        }
        let first = depth - given.len() + 1;
        for (offset, level) in given.iter().enumerate() {
            let len = first + offset;
            if let Some(w) = level.keys().find(|w| w.len() != len) {
                return Err(Error::DimensionMismatch {
                    left: w.len(),
                    right: len,
                });
            }
        }
        let mut levels = Vec::with_capacity(depth);
        let mut lowest = given[0].clone();
        let mut below = Vec::new();
        for _ in 1..first {
            lowest = marginal(&lowest);
            below.push(lowest.clone());
        }
        below.reverse();
        levels.extend(below);
        levels.extend(given);
        Ok(Self {
            alphabet,
            levels,
            provenance,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Longest cylinder length covered.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn provenance(&self) -> &MeasureProvenance {
        &self.provenance
    }

    /// Masses of the words of length `len`.
    pub fn level(&self, len: usize) -> Option<&BTreeMap<Word, Cell>> {
        len.checked_sub(1).and_then(|j| self.levels.get(j))
    }

    /// Mass and radius of `[a]`; words of covered length outside the support
    /// get mass zero. `None` if `a` is empty or longer than the depth.
    pub fn cell(&self, a: &[Symbol]) -> Option<Cell> {
        let level = self.level(a.len())?;
        Some(level.get(a).copied().unwrap_or(Cell {
            value: 0.0,
            log_radius: 0.0,
        }))
    }

    /// Mass of `[a]` (zero outside the covered depth).
    pub fn value(&self, a: &[Symbol]) -> f64 {
        self.cell(a).map_or(0.0, |c| c.value)
    }

    pub fn estimate(&self, a: &[Symbol]) -> Option<Estimate> {
        self.cell(a)
            .map(|c| Estimate::multiplicative(c.value, c.log_radius))
    }

    /// Total mass at length `len`, bracketed.
    pub fn total(&self, len: usize) -> Option<Estimate> {
        let level = self.level(len)?;
        let value: f64 = level.values().map(|c| c.value).sum();
        let r = level.values().map(|c| c.log_radius).fold(0.0, f64::max);
        Some(Estimate::multiplicative(value, r))
    }

    /// The measure restricted to lengths `1..=depth`.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::DepthMismatch {
                required: depth,
                available: self.depth(),
            });
        }
        Ok(Self {
            alphabet: self.alphabet.clone(),
            levels: self.levels[..depth].to_vec(),
            provenance: self.provenance.clone(),
        })
    }

    /// Largest radius at length `len`.
    pub fn max_radius(&self, len: usize) -> f64 {
        self.level(len)
            .map_or(0.0, |l| l.values().map(|c| c.log_radius).fold(0.0, f64::max))
    }

    /// Largest discrepancy `|Σ_s μ[s a] - μ[a]|` over words `a` of length
    /// `len`, which vanishes for shift-invariant measures.
    pub fn stationarity_defect(&self, len: usize) -> Option<f64> {
        let longer = self.level(len + 1)?;
        let level = self.level(len)?;
        let mut left: BTreeMap<&[Symbol], f64> = BTreeMap::new();
        for (w, c) in longer {
            *left.entry(&w[1..]).or_insert(0.0) += c.value;
        }
        let mut worst: f64 = 0.0;
        for (w, c) in level {
            let l = left.get(w.as_slice()).copied().unwrap_or(0.0);
            worst = worst.max((l - c.value).abs());
        }
        for (w, l) in left {
            if !level.contains_key(w) {
                worst = worst.max(l.abs());
            }
        }
        Some(worst)
    }
}
