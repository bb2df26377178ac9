use serde::Serialize;

use super::markov::{pressure, Chain};
use super::measure::{CylinderMeasure, Estimate};
use crate::potential::Potential;
use crate::transfer::{PerronData, TransferMatrix};
use crate::{Error, Result};

/// Entropy of a Gibbs measure by the variational identity, with two direct
/// block-entropy estimates for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `h = log ρ - ∫ φ^{n+1} dμ`, certified.
    pub variational: Estimate,
    /// Length of the words used by the block estimates.
    pub depth: usize,
    /// `H_N / N` with `H_N = -Σ_{|a|=N} μ[a] log μ[a]`.
    pub block_average: f64,
    /// `H_N - H_{N-1}`, exact for Markov measures once `N` exceeds the
    /// memory of the chain.
    pub conditional: f64,
}

/// `-Σ μ[a] log μ[a]` over the words of length `len`.
fn block_entropy(mu: &CylinderMeasure, len: usize) -> f64 {
    mu.level(len).map_or(0.0, |l| {
        l.values()
            .filter(|c| c.value > 0.0)
            .map(|c| -c.value * c.value.ln())
            .sum()
    })
}

/// Bracket of `Σ μ[c] f(c)` over one level of `μ`.
fn integrate(mu: &CylinderMeasure, len: usize, f: impl Fn(&[u8]) -> f64) -> Estimate {
    let mut value = 0.0;
    let mut slack = 0.0;
    for (c, cell) in mu.level(len).expect("covered level") {
        let fc = f(c);
        value += cell.value * fc;
        if cell.value > 0.0 && cell.log_radius > 0.0 {
            slack += cell.value * cell.log_radius.exp_m1() * fc.abs();
        }
    }
    Estimate::additive(value, slack)
}

/// Entropy of the Gibbs measure `μ` of `M_{(m,n)}`.
///
/// The equilibrium state of `φ^{n+1}` satisfies
/// `h(μ) = log ρ - ∫ φ^{n+1} dμ`. The integral uses the words of length
/// `n + 2` when `μ` covers them; otherwise it uses `φ^n` on words of length
/// `n + 1`, which overestimates by at most `var_{n+1}`.
pub fn entropy(
    tm: &TransferMatrix,
    phi: &Potential,
    pd: &PerronData,
    mu: &CylinderMeasure,
) -> Result<EntropyReport> {
    let chain = Chain::new(tm, phi, pd)?;
    let n = chain.n;
    if mu.depth() < n + 1 {
        return Err(Error::DepthMismatch {
            required: n + 1,
            available: mu.depth(),
        });
    }
    let integral = if mu.depth() >= n + 2 {
        integrate(mu, n + 2, |c| {
            phi.finite_range(n + 1, c).expect("word of length n + 2")
        })
    } else {
        let raw = integrate(mu, n + 1, |c| phi.finite_range(n, c).expect("word of length n + 1"));
        let var = phi.exact_variation(n + 1);
        Estimate {
            value: raw.value - var / 2.0,
            lo: raw.lo - var,
            hi: raw.hi,
        }
    };
    let extra = pd.log_rho_radius + chain.truncation;
    let variational = Estimate {
        value: pd.log_rho - integral.value,
        lo: pd.log_rho - integral.hi - extra,
        hi: pd.log_rho - integral.lo + extra,
    };
    let depth = mu.depth();
    let h_n = block_entropy(mu, depth);
    let h_prev = if depth > 1 { block_entropy(mu, depth - 1) } else { 0.0 };
    Ok(EntropyReport {
        variational,
        depth,
        block_average: h_n / depth as f64,
        conditional: h_n - h_prev,
    })
}

/// Relative entropy `h(ν | μ_ψ) = P(ψ, S') - ∫ ψ dν - h(ν)` of an invariant
/// measure `ν` with respect to the Gibbs measure of `ψ` on the subshift
/// `S'` carried by `tm`.
///
/// Every word charged by `ν` at its deepest level must be admissible for
/// `tm`; otherwise `SupportViolation` is returned. A bracket that dips below
/// zero is clamped at zero.
pub fn relative_entropy(
    nu: &CylinderMeasure,
    h_nu: Estimate,
    psi: &Potential,
    tm: &TransferMatrix,
    pd: &PerronData,
) -> Result<Estimate> {
    let chain = Chain::new(tm, psi, pd)?;
    let depth = nu.depth();
    for (w, c) in nu.level(depth).expect("nonempty measure") {
        if c.value > 0.0 && !chain.is_admissible(w) {
            return Err(Error::SupportViolation(format!(
                "ν charges {} which is not admissible in the reference subshift",
                nu.alphabet().render(w)
            )));
        }
    }
    let p = pressure(tm, psi, pd);
    let r = psi.range();
    let integral = if depth >= r {
        integrate(nu, r, |c| psi.value(c).expect("word of the potential's range"))
    } else {
        let raw = integrate(nu, depth, |c| {
            psi.finite_range(depth - 1, c).expect("word of the deepest level")
        });
        let var = psi.exact_variation(depth);
        Estimate {
            value: raw.value - var / 2.0,
            lo: raw.lo - var,
            hi: raw.hi,
        }
    };
    let value = p.value - integral.value - h_nu.value;
    let est = Estimate {
        value,
        lo: p.lo() - integral.hi - h_nu.hi,
        hi: p.hi() - integral.lo - h_nu.lo,
    };
    Ok(est.clamp_nonnegative())
}
