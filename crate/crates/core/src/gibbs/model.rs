use super::entropy::{entropy, EntropyReport};
use super::markov::{gibbs_cylinder, markov_extend, pressure, PressureEstimate};
use super::measure::{CylinderMeasure, Estimate};
use super::mixing::mixing_ratio;
use crate::potential::Potential;
use crate::symbolic::{build_sft, specification_length, SftApproximation, SoficPresentation, Symbol};
use crate::transfer::{build_transfer, perron, PerronData, PerronOptions, TransferMatrix};
use crate::{Budget, Result};

/// Default transfer depth `n = max(m, r - 1) + 2` for a potential of range
/// `r`. It makes `φ^{n+1} = φ` for every locally constant potential.
pub fn default_depth(m: usize, phi: &Potential) -> usize {
    m.max(phi.range().saturating_sub(1)) + 2
}

/// Default period `p = (n + 1)(n + ℓ + 1)` for elementary measures.
pub fn default_period(n: usize, ell: usize) -> usize {
    (n + 1) * (n + ell + 1)
}

/// The approximation `X_m`, its transfer matrix `M_{(m,n)}` and the certified
/// Perron data, bundled for repeated queries.
#[derive(Debug, Clone)]
pub struct GibbsModel {
    phi: Potential,
    ell: usize,
    sft: SftApproximation,
    transfer: TransferMatrix,
    perron: PerronData,
}

impl GibbsModel {
    /// Builds the model with tolerance `1e-12`. `n` defaults to
    /// [`default_depth`].
    pub fn build(
        p: &SoficPresentation,
        phi: &Potential,
        m: usize,
        n: Option<usize>,
        budget: &Budget,
    ) -> Result<Self> {
        Self::build_with(p, phi, m, n, budget, 1e-12)
    }

    /// Builds the model with a given power-iteration tolerance.
    pub fn build_with(
        p: &SoficPresentation,
        phi: &Potential,
        m: usize,
        n: Option<usize>,
        budget: &Budget,
        tol: f64,
    ) -> Result<Self> {
        let ell = specification_length(p, budget)?;
        let sft = build_sft(p, m, budget)?;
        Self::from_sft(sft, ell, phi, n, budget, tol)
    }

    /// Builds the model on an existing approximation with specification
    /// length `ell`.
    pub fn from_sft(
        sft: SftApproximation,
        ell: usize,
        phi: &Potential,
        n: Option<usize>,
        budget: &Budget,
        tol: f64,
    ) -> Result<Self> {
        let n = n.unwrap_or_else(|| default_depth(sft.order(), phi));
        let transfer = build_transfer(&sft, n, phi, budget)?;
        let d = phi.derived_constants();
        // Fallback contraction bound 1 - 1/K₀ for matrices too large for a
        // dense power.
        let lt = d.lambda * d.theta.unwrap_or(1.0);
        let k0 = (d.c.exp() * phi.alphabet().len() as f64).powi(ell as i32) * lt.exp();
        let opts = PerronOptions::from_budget(budget, tol).with_tau_fallback(1.0 - 1.0 / k0);
        let perron = perron(transfer.matrix(), ell + n + 1, &opts)?;
        Ok(Self {
            phi: phi.clone(),
            ell,
            sft,
            transfer,
            perron,
        })
    }

    pub fn m(&self) -> usize {
        self.sft.order()
    }

    pub fn n(&self) -> usize {
        self.transfer.meta().n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn potential(&self) -> &Potential {
        &self.phi
    }

    pub fn sft(&self) -> &SftApproximation {
        &self.sft
    }

    pub fn transfer(&self) -> &TransferMatrix {
        &self.transfer
    }

    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    pub fn pressure(&self) -> PressureEstimate {
        pressure(&self.transfer, &self.phi, &self.perron)
    }

    /// Gibbs cylinders on the words of length `n + 1`.
    pub fn cylinders(&self) -> Result<CylinderMeasure> {
        gibbs_cylinder(&self.transfer, &self.phi, &self.perron)
    }

    /// Gibbs cylinders on all words of length up to `depth`.
    pub fn measure(&self, depth: usize, budget: &Budget) -> Result<CylinderMeasure> {
        markov_extend(
            &self.transfer,
            &self.phi,
            &self.perron,
            depth.max(1) - 1,
            budget,
        )
    }

    /// Entropy report with block estimates at word length `depth`.
    pub fn entropy(&self, depth: usize, budget: &Budget) -> Result<EntropyReport> {
        let depth = depth.max(2);
        let mu = self.measure(depth.max(self.n() + 2), budget)?;
        let report = entropy(&self.transfer, &self.phi, &self.perron, &mu)?;
        if depth == mu.depth() {
            return Ok(report);
        }
        let (block_average, conditional) = entropy_blocks(&mu.truncated(depth)?);
        Ok(EntropyReport {
            depth,
            block_average,
            conditional,
            ..report
        })
    }

    pub fn mixing_ratio(&self, a: &[Symbol], b: &[Symbol], s: usize) -> Result<Estimate> {
        mixing_ratio(&self.transfer, &self.phi, &self.perron, a, b, s)
    }
}

/// `(H_N / N, H_N - H_{N-1})` at the deepest level of `mu`.
fn entropy_blocks(mu: &CylinderMeasure) -> (f64, f64) {
    let h = |len: usize| -> f64 {
        mu.level(len).map_or(0.0, |l| {
            l.values()
                .filter(|c| c.value > 0.0)
                .map(|c| -c.value * c.value.ln())
                .sum()
        })
    };
    let d = mu.depth();
    (h(d) / d as f64, h(d) - h(d - 1))
}

/// `P(φ, X_m) - P(φ, X_{m+1})` bracketed, with the lower end clamped at zero
/// since `X_{m+1} ⊂ X_m`. Each pressure uses its default transfer depth.
pub fn pressure_gap(
    p: &SoficPresentation,
    phi: &Potential,
    m: usize,
    budget: &Budget,
) -> Result<Estimate> {
    let a = GibbsModel::build(p, phi, m, None, budget)?.pressure();
    let b = GibbsModel::build(p, phi, m + 1, None, budget)?.pressure();
    Ok(gap_between(&a, &b))
}

pub(crate) fn gap_between(a: &PressureEstimate, b: &PressureEstimate) -> Estimate {
    let value = a.value - b.value;
    let r = a.radius + b.radius;
    Estimate {
        value: value.max(0.0),
        lo: (value - r).max(0.0),
        hi: (value + r).max(0.0),
    }
}
