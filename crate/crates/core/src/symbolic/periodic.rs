use super::alphabet::{Symbol, Word};
use super::sft::SftApproximation;
use crate::{Budget, Error, Result};

/// Largest SFT for which the trace cross-check is computed during
/// enumeration.
const TRACE_CHECK_LIMIT: usize = 512;

/// Points `x` of an SFT with `T^{p+1} x = x`, each stored as its generating
/// block `x(0:p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSet {
    /// The period `p + 1`.
    pub period: usize,
    /// Generating blocks in lexicographic order.
    pub points: Vec<Word>,
    /// Trace of the `(p+1)`-th power of the 0/1 transition matrix, when the
    /// SFT is small enough for the cross-check.
    pub trace: Option<u128>,
}

impl PeriodicSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Enumerates the periodic points of period `p + 1` of `sft`.
///
/// Fails with [`Error::PeriodTooLarge`] when `#L_m * (p + 1)` or the number of
/// points exceeds `budget.max_words`.
pub fn enumerate_periodic(sft: &SftApproximation, p: usize, budget: &Budget) -> Result<PeriodicSet> {
    let period = p + 1;
    let work = sft.len().saturating_mul(period);
    let too_large = || Error::PeriodTooLarge {
        period,
        words: sft.len(),
        budget: budget.max_words,
    };
    if work > budget.max_words {
        return Err(too_large());
    }
    let window = sft.order() + 1;
    let size = sft.alphabet().len() as Symbol;
    let mut points = Vec::new();
    let mut block: Vec<Symbol> = Vec::with_capacity(period);
    // Depth-first search in lexicographic order, pruning on windows that lie
    // inside the block.
    let mut choice: Vec<Symbol> = vec![0];
    while let Some(&s) = choice.last() {
        if s >= size {
            choice.pop();
            block.pop();
            if let Some(c) = choice.last_mut() {
                *c += 1;
            }
            continue;
        }
        block.push(s);
        let ok = if block.len() >= window {
            sft.index_of(&block[block.len() - window..]).is_some()
        } else {
            sft.is_admissible(&block)
        };
        if ok && block.len() == period {
            if wraps_admissibly(sft, &block) {
                points.push(Word(block.clone()));
                if points.len() > budget.max_words {
                    return Err(too_large());
                }
            }
            block.pop();
            *choice.last_mut().expect("nonempty") += 1;
        } else if ok {
            choice.push(0);
        } else {
            block.pop();
            *choice.last_mut().expect("nonempty") += 1;
        }
    }
    let trace = (sft.len() <= TRACE_CHECK_LIMIT).then(|| sft.trace_count(period));
    if let Some(t) = trace {
        debug_assert_eq!(t, points.len() as u128, "periodic count must equal the trace");
    }
    Ok(PeriodicSet {
        period,
        points,
        trace,
    })
}

/// Checks the windows of `block^∞` that start inside the block and wrap
/// around its end.
fn wraps_admissibly(sft: &SftApproximation, block: &[Symbol]) -> bool {
    let window = sft.order() + 1;
    let len = block.len();
    let start = (len + 1).saturating_sub(window);
    let mut buf = Vec::with_capacity(window);
    (start..len).all(|i| {
        buf.clear();
        buf.extend((0..window).map(|j| block[(i + j) % len]));
        sft.index_of(&buf).is_some()
    })
}
