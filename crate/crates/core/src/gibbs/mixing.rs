use super::markov::Chain;
use super::measure::Estimate;
use crate::potential::Potential;
use crate::symbolic::Symbol;
use crate::transfer::{PerronData, TransferMatrix};
use crate::{Budget, Error, Result};

/// Bracket of `|r - 1|` for `r` known up to a factor `exp(±log_radius)`.
fn distance_to_one(ratio: f64, log_radius: f64) -> Estimate {
    let lo_r = ratio * (-log_radius).exp();
    let hi_r = ratio * log_radius.exp();
    let lo = if lo_r <= 1.0 && 1.0 <= hi_r {
        0.0
    } else {
        (lo_r - 1.0).abs().min((hi_r - 1.0).abs())
    };
    Estimate {
        value: (ratio - 1.0).abs(),
        lo,
        hi: (lo_r - 1.0).abs().max((hi_r - 1.0).abs()),
    }
}

fn check_word(chain: &Chain<'_>, a: &[Symbol], name: &str) -> Result<()> {
    if a.is_empty() || !chain.is_admissible(a) {
        return Err(Error::WordNotAdmissible(format!(
            "{name} is empty or has zero mass"
        )));
    }
    Ok(())
}

/// Mixing ratio `|μ([a] ∩ T^{-s}[b]) / (μ[a] μ[b]) - 1|` for the Gibbs
/// measure of `M_{(m,n)}`, with `s >= |a|`.
///
/// The joint mass is evaluated exactly through the stationary chain: the law
/// of the state after reading `a` is propagated by `s - t_a` transition
/// steps, where `t_a = max(0, |a| - n - 1)`, and paired with the probability
/// that the chain then reads `b`.
pub fn mixing_ratio(
    tm: &TransferMatrix,
    phi: &Potential,
    pd: &PerronData,
    a: &[Symbol],
    b: &[Symbol],
    s: usize,
) -> Result<Estimate> {
    if s < a.len() {
        return Err(Error::GapTooSmall {
            gap: s,
            word_len: a.len(),
        });
    }
    let chain = Chain::new(tm, phi, pd)?;
    check_word(&chain, a, "a")?;
    check_word(&chain, b, "b")?;
    let n = chain.n;
    let dim = tm.dim();

    // Joint law of [a] and the state at time t_a.
    let t_a = a.len().saturating_sub(n + 1);
    let mut f = vec![0.0; dim];
    if a.len() <= n + 1 {
        for c in chain.prefix_range(a) {
            f[c] = chain.stationary(c);
        }
    } else {
        let states = chain.path(a).expect("admissible");
        f[states[states.len() - 1]] = chain.stationary(states[0]) * chain.forced_from(&states);
    }
    for _ in t_a..s {
        let mut next = vec![0.0; dim];
        for (c, &fc) in f.iter().enumerate() {
            if fc == 0.0 {
                continue;
            }
            for (d, _) in tm.row(c) {
                next[d] += fc * chain.transition(c, d);
            }
        }
        f = next;
    }
    // Probability of then reading b from each state.
    let joint: f64 = if b.len() <= n + 1 {
        chain.prefix_range(b).map(|c| f[c]).sum()
    } else {
        let states = chain.path(b).expect("admissible");
        f[states[0]] * chain.forced_from(&states)
    };
    let (mu_a, r_a) = chain.mass(a);
    let (mu_b, r_b) = chain.mass(b);
    let steps = s + b.len().saturating_sub(n + 1);
    let radius = chain.path_radius(steps) + r_a + r_b + chain.truncation;
    let rounding = 4.0 * (s as f64 + 2.0) * (dim as f64 + 2.0) * f64::EPSILON;
    Ok(distance_to_one(joint / (mu_a * mu_b), radius + rounding))
}

/// Mixing ratio computed by summing the cylinders of all words `u` of length
/// `max(|a|, s + |b|)` with `u(0:|a|-1) = a` and `u(s:s+|b|-1) = b`.
///
/// Valid for every `s`, including overlapping cylinders (`s < |a|`).
pub fn mixing_ratio_direct(
    tm: &TransferMatrix,
    phi: &Potential,
    pd: &PerronData,
    a: &[Symbol],
    b: &[Symbol],
    s: usize,
    budget: &Budget,
) -> Result<Estimate> {
    let chain = Chain::new(tm, phi, pd)?;
    check_word(&chain, a, "a")?;
    check_word(&chain, b, "b")?;
    let len = a.len().max(s + b.len());
    let mut pattern: Vec<Option<Symbol>> = vec![None; len];
    for (i, &x) in a.iter().enumerate() {
        pattern[i] = Some(x);
    }
    for (i, &x) in b.iter().enumerate() {
        match pattern[s + i] {
            Some(y) if y != x => return Ok(distance_to_one(0.0, 0.0)),
            _ => pattern[s + i] = Some(x),
        }
    }
    let size = tm
        .index()
        .iter()
        .flat_map(|w| w.iter().copied())
        .max()
        .map_or(0, |x| x as usize + 1);
    // Completes the free positions level by level, pruned by admissibility.
    let mut words: Vec<Vec<Symbol>> = vec![Vec::new()];
    for slot in &pattern {
        let mut grown = Vec::new();
        for w in &words {
            let choices: Vec<Symbol> = match slot {
                Some(x) => vec![*x],
                None => (0..size as Symbol).collect(),
            };
            for x in choices {
                let mut u = w.clone();
                u.push(x);
                if chain.is_admissible(&u) {
                    grown.push(u);
                }
            }
        }
        budget.check_words("mixing completions", grown.len())?;
        words = grown;
    }
    let mut joint = 0.0;
    let mut r_joint: f64 = 0.0;
    for u in &words {
        let (v, r) = chain.mass(u);
        joint += v;
        r_joint = r_joint.max(r);
    }
    let (mu_a, r_a) = chain.mass(a);
    let (mu_b, r_b) = chain.mass(b);
    let rounding = 4.0 * (len as f64 + 2.0) * f64::EPSILON;
    Ok(distance_to_one(joint / (mu_a * mu_b), r_joint + r_a + r_b + rounding))
}
