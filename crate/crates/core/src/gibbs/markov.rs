use std::collections::BTreeMap;

use serde::Serialize;

use super::measure::{Cell, CylinderMeasure, Estimate, MeasureProvenance};
use crate::potential::Potential;
use crate::symbolic::{Symbol, Word};
use crate::transfer::{PerronData, TransferMatrix};
use crate::{Budget, Error, Result};

/// Topological pressure `P(φ, X_m)` with a certified radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureEstimate {
    pub value: f64,
    pub radius: f64,
    pub m: usize,
    pub n: usize,
}

impl PressureEstimate {
    pub fn lo(&self) -> f64 {
        self.value - self.radius
    }

    pub fn hi(&self) -> f64 {
        self.value + self.radius
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::additive(self.value, self.radius)
    }
}

/// Extra log radius for measures built from `φ^{n+1}`: zero when
/// `φ^{n+1} = φ`, unbounded otherwise.
pub(crate) fn truncation_radius(phi: &Potential, n: usize) -> f64 {
    if phi.is_exact_at(n + 1) {
        0.0
    } else {
        f64::INFINITY
    }
}

fn check_dims(tm: &TransferMatrix, pd: &PerronData) -> Result<()> {
    if tm.dim() != pd.v.len() || tm.dim() != pd.w.len() {
        return Err(Error::DimensionMismatch {
            left: tm.dim(),
            right: pd.v.len(),
        });
    }
    Ok(())
}

/// Stationary Markov chain on the index words of a transfer matrix.
///
/// The chain has transition probabilities `M(c, c') v(c') / (ρ v(c))` and
/// stationary law `w(c) v(c)`. Its law on words is the Gibbs measure of
/// `φ^{n+1}` on `X_m`.
pub(crate) struct Chain<'a> {
    pub tm: &'a TransferMatrix,
    pub pd: &'a PerronData,
    pub n: usize,
    /// Extra log radius from truncating the potential.
    pub truncation: f64,
}

impl<'a> Chain<'a> {
    pub fn new(tm: &'a TransferMatrix, phi: &Potential, pd: &'a PerronData) -> Result<Self> {
        check_dims(tm, pd)?;
        let n = tm.meta().n;
        Ok(Self {
            tm,
            pd,
            n,
            truncation: truncation_radius(phi, n),
        })
    }

    /// Log radius of a path mass with `steps` transitions.
    pub fn path_radius(&self, steps: usize) -> f64 {
        let rounding = 4.0 * (steps as f64 + 2.0) * f64::EPSILON;
        self.pd.v_radius + self.pd.w_radius + steps as f64 * self.pd.log_rho_radius + rounding
    }

    /// Index range of the states whose word starts with `prefix`.
    pub fn prefix_range(&self, prefix: &[Symbol]) -> std::ops::Range<usize> {
        let index = self.tm.index();
        let start = index.partition_point(|w| w.as_slice() < prefix);
        let end = start + index[start..].partition_point(|w| w.starts_with(prefix));
        start..end
    }

    /// Stationary probability `w(c) v(c)` of state `c`.
    pub fn stationary(&self, c: usize) -> f64 {
        self.pd.w[c] * self.pd.v[c]
    }

    /// Transition probability between states.
    pub fn transition(&self, c: usize, d: usize) -> f64 {
        self.tm.get(c, d) * self.pd.v[d] / (self.pd.rho * self.pd.v[c])
    }

    /// States visited by the chain while reading `u` (`|u| >= n + 1`), or
    /// `None` if `u` is not a path of the chain.
    pub fn path(&self, u: &[Symbol]) -> Option<Vec<usize>> {
        let k = self.n + 1;
        let states: Vec<usize> = u
            .windows(k)
            .map(|win| self.tm.index_of(win))
            .collect::<Option<_>>()?;
        if states.windows(2).any(|p| self.tm.get(p[0], p[1]) == 0.0) {
            return None;
        }
        Some(states)
    }

    /// Probability that the chain reads `u` starting from state `c`
    /// (the word of `c` must agree with the first `n + 1` symbols of `u`).
    pub fn forced_from(&self, states: &[usize]) -> f64 {
        states
            .windows(2)
            .map(|p| self.transition(p[0], p[1]))
            .product()
    }

    /// `μ[u]` with its log radius, for any nonempty word.
    pub fn mass(&self, u: &[Symbol]) -> (f64, f64) {
        if u.len() <= self.n + 1 {
            let value = self.prefix_range(u).map(|c| self.stationary(c)).sum();
            return (value, self.path_radius(0) + self.truncation);
        }
        match self.path(u) {
            None => (0.0, 0.0),
            Some(states) => {
                let value = self.stationary(states[0]) * self.forced_from(&states);
                (value, self.path_radius(states.len() - 1) + self.truncation)
            }
        }
    }

    /// Whether `u` has positive mass.
    pub fn is_admissible(&self, u: &[Symbol]) -> bool {
        if u.len() <= self.n + 1 {
            !self.prefix_range(u).is_empty()
        } else {
            self.path(u).is_some()
        }
    }
}

/// Cylinder masses `μ[a] = w(a) v(a)` on the index words of `M_{(m,n)}`,
/// i.e. at depth `n + 1`, with shorter cylinders by marginalization.
///
/// These are the cylinder masses of the Gibbs measure of `φ^{n+1}` on `X_m`,
/// which is the Gibbs measure of `φ` when the potential's range is at most
/// `n + 2`. For longer ranges the radius is reported as infinite.
pub fn gibbs_cylinder(
    tm: &TransferMatrix,
    phi: &Potential,
    pd: &PerronData,
) -> Result<CylinderMeasure> {
    let chain = Chain::new(tm, phi, pd)?;
    let radius = chain.path_radius(0) + chain.truncation;
    let top: BTreeMap<Word, Cell> = tm
        .index()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (
                a.clone(),
                Cell {
                    value: chain.stationary(i),
                    log_radius: radius,
                },
            )
        })
        .collect();
    CylinderMeasure::from_top(
        phi.alphabet().clone(),
        chain.n + 1,
        top,
        MeasureProvenance {
            m: tm.meta().m,
            n: Some(chain.n),
            p: None,
            method: "perron".into(),
        },
    )
}

/// Extends the Gibbs cylinders of `M_{(m,n)}` to every word of length
/// `big_n + 1` through the stationary Markov chain:
/// `μ[a(0:N)] = w(a(0:n)) Π_j M(a(j:j+n), a(j+1:j+n+1)) / ρ^{N-n} v(a(N-n:N))`.
///
/// Each length is computed directly, so the radius at length `n + 1 + t` is
/// `w_radius + v_radius + t · log_rho_radius`. Products are accumulated in
/// log space.
pub fn markov_extend(
    tm: &TransferMatrix,
    phi: &Potential,
    pd: &PerronData,
    big_n: usize,
    budget: &Budget,
) -> Result<CylinderMeasure> {
    let chain = Chain::new(tm, phi, pd)?;
    let n = chain.n;
    let base = gibbs_cylinder(tm, phi, pd)?;
    if big_n <= n {
        return base.truncated(big_n + 1);
    }
    let log_rho = pd.log_rho;
    // Frontier entries: (word, log of w(first) · ΠM / ρ^t, last state).
    let mut frontier: Vec<(Word, f64, usize)> = tm
        .index()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), pd.w[i].ln(), i))
        .collect();
    let mut levels = Vec::with_capacity(big_n - n);
    for t in 1..=(big_n - n) {
        let mut grown = Vec::with_capacity(frontier.len() * 2);
        for (word, lw, last) in &frontier {
            for (j, value) in tm.row(*last) {
                let s = *tm.index()[j].last().expect("nonempty index word");
                grown.push((word.pushed(s), lw + value.ln() - log_rho, j));
            }
        }
        budget.check_words("Markov extension", grown.len())?;
        let radius = chain.path_radius(t) + chain.truncation;
        let level: BTreeMap<Word, Cell> = grown
            .iter()
            .map(|(w, lw, last)| {
                (
                    w.clone(),
                    Cell {
                        value: (lw + pd.v[*last].ln()).exp(),
                        log_radius: radius,
                    },
                )
            })
            .collect();
        levels.push(level);
        frontier = grown;
    }
    let mut given = vec![base.level(n + 1).expect("base level").clone()];
    given.extend(levels);
    CylinderMeasure::from_levels(
        phi.alphabet().clone(),
        big_n + 1,
        given,
        MeasureProvenance {
            m: tm.meta().m,
            n: Some(n),
            p: None,
            method: "markov".into(),
        },
    )
}

/// `P(φ, X_m)` from the Perron root of `M_{(m,n)}`.
///
/// `log ρ` is exactly the pressure of `φ^{n+1}` on `X_m`, and
/// `‖φ - φ^{n+1}‖ <= var_{n+2}`, so the radius is the Perron radius of
/// `log ρ` plus the exact variation of the table at depth `n + 2`.
pub fn pressure(tm: &TransferMatrix, phi: &Potential, pd: &PerronData) -> PressureEstimate {
    let n = tm.meta().n;
    PressureEstimate {
        value: pd.log_rho,
        radius: pd.log_rho_radius + phi.exact_variation(n + 2),
        m: tm.meta().m,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{build_sft, Alphabet, SoficPresentation};
    use crate::transfer::{build_transfer, perron, PerronOptions};

    fn setup(p: &SoficPresentation, m: usize, n: usize, phi: &Potential) -> (TransferMatrix, PerronData) {
        let b = Budget::default();
        let x = build_sft(p, m, &b).unwrap();
        let tm = build_transfer(&x, n, phi, &b).unwrap();
        let pd = perron(tm.matrix(), n + 1, &PerronOptions::default()).unwrap();
        (tm, pd)
    }

    #[test]
    fn golden_parry_values() {
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let phi = Potential::zero(Alphabet::binary());
        let (tm, pd) = setup(&SoficPresentation::golden_mean(), 1, 1, &phi);
        let mu = markov_extend(&tm, &phi, &pd, 4, &Budget::default()).unwrap();
        assert!((mu.value(&[0]) - g * g / (g * g + 1.0)).abs() < 1e-12);
        assert!((mu.value(&[0, 0]) - g / (g * g + 1.0)).abs() < 1e-12);
        let defect = mu.stationarity_defect(3).unwrap();
        assert!(defect < 1e-11, "{defect}");
        let chain = Chain::new(&tm, &phi, &pd).unwrap();
        for len in 1..=5 {
            for (w, c) in mu.level(len).unwrap() {
                assert!((chain.mass(w).0 - c.value).abs() < 1e-14);
            }
        }
        let p = pressure(&tm, &phi, &pd);
        assert!((p.value - g.ln()).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_product() {
        let phi = Potential::bernoulli(Alphabet::binary(), &[0.25, 0.75]).unwrap();
        let (tm, pd) = setup(&SoficPresentation::full_shift(2).unwrap(), 0, 0, &phi);
        let mu = markov_extend(&tm, &phi, &pd, 5, &Budget::default()).unwrap();
        let w = [1, 0, 1, 1, 0, 1];
        assert!((mu.value(&w) - 0.25 * 0.25 * 0.75f64.powi(4)).abs() < 1e-14);
        assert!(pressure(&tm, &phi, &pd).value.abs() < 1e-14);
    }
}
