use std::collections::BTreeMap;

use super::measure::{Cell, CylinderMeasure, Estimate, MeasureProvenance};
use crate::potential::{Potential, Sequence};
use crate::symbolic::{enumerate_periodic, SftApproximation, Symbol, Word};
use crate::transfer::{build_transfer, DenseMatrix};
use crate::{Budget, Error, Result};

/// The elementary measure: the atomic measure on the points of period
/// `p + 1` of `X_m`, each weighted by `exp(S_pφ)`.
///
/// Cylinders of every length up to `p + 1` are reported. The only error is
/// floating-point rounding of the normalization.
pub fn elementary_measure(
    sft: &SftApproximation,
    p: usize,
    phi: &Potential,
    budget: &Budget,
) -> Result<CylinderMeasure> {
    if phi.alphabet() != sft.alphabet() {
        return Err(Error::InvalidPotential(
            "potential and subshift use different alphabets".into(),
        ));
    }
    let periodic = enumerate_periodic(sft, p, budget)?;
    if periodic.is_empty() {
        return Err(Error::Config(format!(
            "X_{} has no points of period {}",
            sft.order(),
            p + 1
        )));
    }
    let logs = periodic
        .points
        .iter()
        .map(|b| phi.birkhoff_sum(Sequence::Periodic(b), p))
        .collect::<Result<Vec<f64>>>()?;
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z = compensated_sum(logs.iter().map(|l| (l - top).exp()));
    let log_z = top + z.ln();
    // Each Birkhoff sum accumulates p + 1 terms of size at most ‖φ‖, so its
    // absolute error is below (p + 2)^2 ‖φ‖ ε. Numerator and normalization
    // each carry that error, plus a few ε for exp, ln and the compensated sum.
    let steps = p as f64 + 2.0;
    let rounding = 2.0 * steps * steps * (1.0 + phi.norm()) * f64::EPSILON + 8.0 * f64::EPSILON;
    let cells: BTreeMap<Word, Cell> = periodic
        .points
        .iter()
        .zip(&logs)
        .map(|(b, l)| {
            (
                b.clone(),
                Cell {
                    value: (l - log_z).exp(),
                    log_radius: rounding,
                },
            )
        })
        .collect();
    CylinderMeasure::from_top(
        sft.alphabet().clone(),
        p + 1,
        cells,
        MeasureProvenance {
            m: sft.order(),
            n: None,
            p: Some(p),
            method: "periodic".into(),
        },
    )
}

/// Neumaier summation: relative error `2ε` up to second-order terms.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for t in terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    sum + carry
}

/// The elementary measure of `[a]`, `|a| = n + 1`, through the transfer
/// matrix: `M^{p+1}(a, a) / Tr M^{p+1}`.
///
/// Closed walks of length `p + 1` on the words of length `n + 1` are exactly
/// the points of period `p + 1`, and their weights use `φ^{n+1}` in place of
/// `φ`. Since `0 <= φ^{n+1} - φ <= var_{n+2}` along every orbit, numerator
/// and denominator are each inflated by a factor in `[1, exp((p+1)var_{n+2})]`,
/// which is the multiplicative slack returned. It vanishes when the
/// potential's range is at most `n + 2`.
pub fn elementary_via_trace(
    sft: &SftApproximation,
    n: usize,
    p: usize,
    phi: &Potential,
    a: &[Symbol],
    budget: &Budget,
) -> Result<Estimate> {
    if a.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: n + 1,
        });
    }
    let all = elementary_via_trace_all(sft, n, p, phi, budget)?;
    Ok(all
        .binary_search_by(|(w, _)| w.as_slice().cmp(a))
        .map_or(Estimate::exact(0.0), |i| all[i].1))
}

/// [`elementary_via_trace`] for every word of length `n + 1` of `X_m` at
/// once, sharing one matrix power. Words come in lexicographic order.
pub fn elementary_via_trace_all(
    sft: &SftApproximation,
    n: usize,
    p: usize,
    phi: &Potential,
    budget: &Budget,
) -> Result<Vec<(Word, Estimate)>> {
    if n + 1 < sft.order() {
        return Err(Error::Config(format!(
            "transfer depth n = {n} must satisfy n + 1 >= m = {}",
            sft.order()
        )));
    }
    let tm = build_transfer(sft, n, phi, budget)?;
    if tm.dim() > budget.dense_limit {
        return Err(Error::BudgetExceeded {
            what: "dense matrix power",
            size: tm.dim(),
            budget: budget.dense_limit,
        });
    }
    let (power, _) = DenseMatrix::scaled_power(tm.matrix(), p + 1);
    let trace = power.trace();
    if trace <= 0.0 {
        return Err(Error::Config(format!(
            "X_{} has no points of period {}",
            sft.order(),
            p + 1
        )));
    }
    let slack = (p + 1) as f64 * phi.exact_variation(n + 2);
    let rounding = 2.0 * (p as f64 + 2.0) * (tm.dim() as f64 + 2.0) * f64::EPSILON;
    let mut out: Vec<(Word, Estimate)> = tm
        .index()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let value = power.get(i, i) / trace;
            (w.clone(), Estimate::multiplicative(value, slack + rounding))
        })
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}
