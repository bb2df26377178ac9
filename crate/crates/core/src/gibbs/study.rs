use rayon::prelude::*;
use serde::Serialize;

use super::bounds::ProofConstants;
use super::distance::weak_distance;
use super::markov::PressureEstimate;
use super::measure::Estimate;
use super::model::{gap_between, GibbsModel};
use crate::potential::Potential;
use crate::symbolic::{specification_length, SoficPresentation};
use crate::{Budget, Error, Result};

/// Gaps below this value are treated as floating noise in the rate fit.
pub const GAP_NOISE_FLOOR: f64 = 1e-14;

/// Parameters of [`convergence_study`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyOptions {
    /// Weak-distance cutoff `K`: levels `1..=K + 1` are summed exactly.
    pub depth: usize,
    /// Word length of the block-entropy estimates.
    pub block_depth: usize,
    /// Power-iteration tolerance.
    pub tol: f64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            depth: 8,
            block_depth: 12,
            tol: 1e-12,
        }
    }
}

/// One row of a convergence study, comparing `X_m` with `X_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRow {
    pub m: usize,
    /// Transfer depth used for `X_m`.
    pub n: usize,
    pub pressure: PressureEstimate,
    /// `D(μ^m, μ^{m+1})`.
    pub distance: Estimate,
    /// `P(φ, X_m) - P(φ, X_{m+1})`.
    pub pressure_gap: Estimate,
    /// Variational entropy `h(μ^m)`.
    pub entropy: Estimate,
    /// `|h(μ^m) - h(μ^{m+1})|`.
    pub entropy_gap: Estimate,
    /// Conditional block entropy of `μ^m` at the block depth.
    pub block_entropy: f64,
    /// `|block_entropy(m) - block_entropy(m + 1)|`.
    pub block_entropy_gap: f64,
}

/// Least-squares fit of `log gap ≈ intercept + slope · m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// `exp(slope)`, the fitted geometric rate.
    pub rate: f64,
    pub r_squared: f64,
    /// Number of gaps above [`GAP_NOISE_FLOOR`] used in the fit.
    pub points: usize,
}

/// Result of [`convergence_study`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<StudyRow>,
    /// Pressure of the approximation one past the last row.
    pub final_pressure: PressureEstimate,
    /// Fit of the pressure gaps; `None` with fewer than two usable gaps.
    pub pressure_fit: Option<RateFit>,
    /// Fit of the truncated `D(μ^m, μ^{m+1})` over the rows whose lower
    /// bracket is positive.
    pub distance_fit: Option<RateFit>,
    /// A-priori rate `θ_FT = max(θ_𝓔, θ_X, 1/2)`, when available.
    pub theta_ft: Option<f64>,
    /// Bracket for `P(φ, X)`. The upper end is certified because
    /// `X ⊂ X_m`; the lower end extrapolates the remaining gaps with the
    /// slower of the fitted and the last observed rate.
    pub limit: Option<Estimate>,
}

/// Ordinary least squares on `(x, ln y)` over the points with
/// `y >= GAP_NOISE_FLOOR`.
pub fn fit_log_rate(points: &[(f64, f64)]) -> Option<RateFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y >= GAP_NOISE_FLOOR && y.is_finite())
        .map(|&(x, y)| (x, y.ln()))
        .collect();
    let k = pts.len();
    if k < 2 {
        return None;
    }
    let kf = k as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / kf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / kf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(RateFit {
        slope,
        intercept: my - slope * mx,
        rate: slope.exp(),
        r_squared,
        points: k,
    })
}

struct Level {
    model: GibbsModel,
    pressure: PressureEstimate,
    entropy: Estimate,
    block: f64,
    measure: super::measure::CylinderMeasure,
}

fn level(
    p: &SoficPresentation,
    phi: &Potential,
    m: usize,
    ell: usize,
    opts: &StudyOptions,
    budget: &Budget,
) -> Result<Level> {
    let sft = crate::symbolic::build_sft(p, m, budget)?;
    let model = GibbsModel::from_sft(sft, ell, phi, None, budget, opts.tol)?;
    let report = model.entropy(opts.block_depth, budget)?;
    let measure = model.measure(opts.depth + 1, budget)?;
    Ok(Level {
        pressure: model.pressure(),
        entropy: report.variational,
        block: report.conditional,
        measure,
        model,
    })
}

fn abs_difference(a: &Estimate, b: &Estimate) -> Estimate {
    let lo = a.lo - b.hi;
    let hi = a.hi - b.lo;
    let value = (a.value - b.value).abs();
    if lo <= 0.0 && hi >= 0.0 {
        Estimate {
            value,
            lo: 0.0,
            hi: hi.max(-lo),
        }
    } else {
        Estimate {
            value,
            lo: lo.abs().min(hi.abs()),
            hi: lo.abs().max(hi.abs()),
        }
    }
}

/// Convergence of the approximations `X_m` for every `m` in `ms`.
///
/// Each row compares `X_m` with `X_{m+1}`: weak distance of the Gibbs
/// measures truncated at `K`, pressure gap, and entropy gaps. The models
/// are built in parallel and merged in the order of `ms`.
pub fn convergence_study(
    p: &SoficPresentation,
    phi: &Potential,
    ms: &[usize],
    opts: &StudyOptions,
    budget: &Budget,
) -> Result<ConvergenceStudy> {
    if ms.is_empty() {
        return Err(Error::Config("empty m range".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    let ell = specification_length(p, budget)?;
    let mut orders: Vec<usize> = ms.iter().flat_map(|&m| [m, m + 1]).collect();
    orders.sort_unstable();
    orders.dedup();
    let levels: Vec<Level> = orders
        .par_iter()
        .map(|&m| level(p, phi, m, ell, opts, budget))
        .collect::<Result<_>>()?;
    let at = |m: usize| &levels[orders.binary_search(&m).expect("order computed")];

    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        let (a, b) = (at(m), at(m + 1));
        rows.push(StudyRow {
            m,
            n: a.model.n(),
            pressure: a.pressure,
            distance: weak_distance(&a.measure, &b.measure, opts.depth)?,
            pressure_gap: gap_between(&a.pressure, &b.pressure),
            entropy: a.entropy,
            entropy_gap: abs_difference(&a.entropy, &b.entropy),
            block_entropy: a.block,
            block_entropy_gap: (a.block - b.block).abs(),
        });
    }
    let last = *ms.iter().max().expect("nonempty");
    let final_pressure = at(last + 1).pressure;

    let pressure_fit = fit_log_rate(
        &rows
            .iter()
            .map(|r| (r.m as f64, r.pressure_gap.value))
            .collect::<Vec<_>>(),
    );
    let distance_fit = fit_log_rate(
        &rows
            .iter()
            .filter(|r| r.distance.lo > 0.0)
            .map(|r| (r.m as f64, r.distance.value))
            .collect::<Vec<_>>(),
    );
    let theta_ft = ProofConstants::compute(p, phi, budget)
        .ok()
        .and_then(|k| k.theta_ft);
    let limit = limit_bracket(&rows, &final_pressure, pressure_fit.as_ref());
    Ok(ConvergenceStudy {
        rows,
        final_pressure,
        pressure_fit,
        distance_fit,
        theta_ft,
        limit,
    })
}

fn limit_bracket(
    rows: &[StudyRow],
    last: &PressureEstimate,
    fit: Option<&RateFit>,
) -> Option<Estimate> {
    let last_m = rows.iter().map(|r| r.m).max()?;
    let gaps: Vec<(usize, f64)> = rows
        .iter()
        .filter(|r| r.pressure_gap.value >= GAP_NOISE_FLOOR)
        .map(|r| (r.m, r.pressure_gap.hi))
        .collect();
    let Some(fit) = fit else {
        // No decay to extrapolate: only admissible when every gap vanished.
        let widest = rows.iter().map(|r| r.pressure_gap.hi).fold(0.0, f64::max);
        return (gaps.is_empty()).then(|| Estimate {
            value: last.value,
            lo: last.lo() - widest,
            hi: last.hi(),
        });
    };
    // Slower of the fitted rate and the per-step rate between the last two
    // nonzero gaps.
    let mut rate = fit.rate;
    if let [.., (m1, g1), (m2, g2)] = gaps.as_slice() {
        rate = rate.max((g2 / g1).powf(1.0 / (m2 - m1) as f64));
    }
    if !(rate < 1.0) {
        return None;
    }
    // Every later order is charged the extrapolated gap, anchored at the
    // larger of the fitted and the last observed nonzero gap.
    let (m_g, g) = *gaps.last()?;
    let fitted = (fit.intercept + fit.slope * m_g as f64).exp();
    let anchor = g.max(fitted);
    let tail = anchor * rate.powi((last_m + 1 - m_g) as i32) / (1.0 - rate);
    Some(Estimate {
        value: last.value - tail / 2.0,
        lo: last.lo() - tail,
        hi: last.hi(),
    })
}
