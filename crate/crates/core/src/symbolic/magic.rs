use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::alphabet::{Symbol, Word};
use super::presentation::SoficPresentation;
use super::sft::admissible_words_within;
use crate::potential::Potential;
use crate::{Budget, Error, Result};

/// Largest number of elementary checks per gap length.
const GAP_CHECK_LIMIT: usize = 50_000_000;

/// Shortest synchronizing word of `p`, found by breadth-first search over the
/// subset automaton started from the full vertex set.
///
/// Reading the returned word from any vertex where it is readable ends at one
/// and the same vertex. Among shortest words the lexicographically smallest
/// is returned.
pub fn find_magic_word(p: &SoficPresentation, budget: &Budget) -> Result<Word> {
    let start = p.all_vertices();
    if start.count_ones(..) == 1 {
        return Ok(Word::empty());
    }
    let cap = if p.num_vertices() < usize::BITS as usize {
        budget.max_subsets.min(1usize << p.num_vertices())
    } else {
        budget.max_subsets
    };
    let mut seen: HashSet<FixedBitSet> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Word::empty())]);
    while let Some((set, word)) = queue.pop_front() {
        for s in 0..p.alphabet().len() as Symbol {
            let image = p.read(&set, s);
            match image.count_ones(..) {
                0 => continue,
                1 => return Ok(word.pushed(s)),
                _ => {}
            }
            if seen.insert(image.clone()) {
                if seen.len() > cap {
                    return Err(Error::NoMagicWord {
                        explored: seen.len(),
                    });
                }
                queue.push_back((image, word.pushed(s)));
            }
        }
    }
    Err(Error::NoMagicWord {
        explored: seen.len(),
    })
}

/// Partial map on vertices induced by reading a word; `NONE` marks vertices
/// where the word is not readable.
type Action = Vec<u16>;
const NONE: u16 = u16::MAX;

fn compose(a: &Action, b: &Action) -> Action {
    a.iter()
        .map(|&v| if v == NONE { NONE } else { b[v as usize] })
        .collect()
}

fn is_zero(a: &Action) -> bool {
    a.iter().all(|&v| v == NONE)
}

/// Whether the partial map has a periodic vertex, i.e. whether the periodic
/// sequence `u^∞` is a point of the subshift for any word `u` inducing it.
fn has_cycle(a: &Action) -> bool {
    let n = a.len();
    let mut alive: Vec<u16> = (0..n as u16).collect();
    for _ in 0..n {
        alive = alive
            .into_iter()
            .map(|v| a[v as usize])
            .filter(|&v| v != NONE)
            .collect();
        if alive.is_empty() {
            return false;
        }
    }
    true
}

/// Specification length of the presented subshift.
///
/// Returns the smallest `L` such that for every gap `k >= L` and every pair
/// of admissible words `a`, `b` there are words `c1`, `c2` of length `k` with
/// `(a c1 b c2)^∞` in the subshift. This is decided exactly over the
/// transition monoid of the presentation. When the monoid has more than
/// `budget.max_subsets` elements, the primitivity exponent of the unlabeled
/// adjacency matrix is returned instead. That exponent is always a valid,
/// possibly larger, specification length.
pub fn specification_length(p: &SoficPresentation, budget: &Budget) -> Result<usize> {
    let fallback = p.primitivity_exponent()?;
    let n = p.num_vertices();
    if n >= NONE as usize {
        return Ok(fallback);
    }
    let letters: Vec<Action> = (0..p.alphabet().len() as Symbol)
        .map(|s| {
            (0..n)
                .map(|v| p.step(v, s).map_or(NONE, |t| t as u16))
                .collect()
        })
        .collect();

    // Elements realized by nonempty admissible words.
    let mut elements: Vec<Action> = Vec::new();
    let mut ids: HashMap<Action, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for l in &letters {
        if !is_zero(l) && !ids.contains_key(l) {
            ids.insert(l.clone(), elements.len());
            elements.push(l.clone());
            queue.push_back(elements.len() - 1);
        }
    }
    while let Some(i) = queue.pop_front() {
        for l in &letters {
            let c = compose(&elements[i], l);
            if is_zero(&c) || ids.contains_key(&c) {
                continue;
            }
            if elements.len() >= budget.max_subsets {
                return Ok(fallback);
            }
            ids.insert(c.clone(), elements.len());
            elements.push(c);
            queue.push_back(elements.len() - 1);
        }
    }
    let identity: Action = (0..n as u16).collect();

    // Actions of the words of length k, for k = 0, 1, ... until the sequence
    // of sets repeats.
    let mut history: Vec<BTreeSet<Action>> = vec![BTreeSet::from([identity])];
    let repeat_from = loop {
        let last = history.last().expect("nonempty");
        let next: BTreeSet<Action> = last
            .iter()
            .flat_map(|a| letters.iter().map(move |l| compose(a, l)))
            .filter(|c| !is_zero(c))
            .collect();
        if let Some(j) = history.iter().position(|h| *h == next) {
            break j;
        }
        history.push(next);
    };

    let mut ok = Vec::with_capacity(history.len());
    for gaps in &history {
        let checks = elements.len().pow(2).saturating_mul(gaps.len().pow(2));
        if checks > GAP_CHECK_LIMIT {
            return Ok(fallback);
        }
        let left: Vec<Vec<Action>> = elements
            .iter()
            .map(|a| {
                gaps.iter()
                    .map(|c| compose(a, c))
                    .filter(|x| !is_zero(x))
                    .collect()
            })
            .collect();
        let joins = left.iter().all(|xs| {
            left.iter()
                .all(|ys| xs.iter().any(|x| ys.iter().any(|y| has_cycle(&compose(x, y)))))
        });
        ok.push(joins);
    }
    if ok[repeat_from..].iter().any(|&x| !x) {
        return Ok(fallback);
    }
    Ok(ok.iter().rposition(|&x| !x).map_or(0, |i| i + 1))
}

/// Constants of the magic-word boundary estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagicConstants {
    /// Magic word of length `k + 1`.
    pub word: Word,
    pub k: usize,
    /// Specification length used for the constants.
    pub ell: usize,
    pub epsilon: f64,
    pub theta_x: f64,
    pub m_x: usize,
    pub c_x: f64,
}

/// Evaluates `k`, `ε^w`, `θ_X`, `m_X` and `C_X` for the presentation and
/// potential.
///
/// The magic word is extended by followers until it has length `k + 1` with
/// `k >= ℓ + 1`; a magic word followed by any admissible continuation is again
/// magic. Birkhoff sums over cylinders are evaluated exactly by maximizing
/// and minimizing over all continuations of the potential's window.
pub fn magic_boundary_constants(
    p: &SoficPresentation,
    phi: &Potential,
    budget: &Budget,
) -> Result<MagicConstants> {
    let ell = specification_length(p, budget)?;
    let mut word = find_magic_word(p, budget)?;
    let target_len = (ell + 2).max(word.len()).max(2);
    let mut end = {
        let image = p.read_word(&p.all_vertices(), &word);
        image.ones().next().expect("magic word is readable")
    };
    while word.len() < target_len {
        let s = (0..p.alphabet().len() as Symbol)
            .find(|&s| p.step(end, s).is_some())
            .expect("essential vertex");
        end = p.step(end, s).expect("edge exists");
        word = word.pushed(s);
    }
    let k = word.len() - 1;
    let size = p.alphabet().len() as f64;
    let norm = phi.norm();
    let lambda = phi.declared_lambda();

    let (w_min, _) = phi.birkhoff_extremes(&word);
    let words = admissible_words_within(p, k, budget)?;
    let denom: f64 = words
        .iter()
        .filter(|b| **b != word)
        .map(|b| phi.birkhoff_extremes(b).1.exp())
        .sum();
    let spread = (size * (2.0 * norm).exp()).powi(ell as i32);
    let epsilon = w_min.exp() / denom / spread;
    let theta_x = (1.0 + epsilon).powf(-1.0 / k as f64);
    Ok(MagicConstants {
        word,
        k,
        ell,
        epsilon,
        theta_x,
        m_x: 2 * k * (k + ell),
        c_x: spread * (4.0 * lambda).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    #[test]
    fn magic_words() {
        let b = Budget::default();
        let full = SoficPresentation::full_shift(2).unwrap();
        assert_eq!(find_magic_word(&full, &b).unwrap(), Word::empty());
        let even = SoficPresentation::even_shift();
        assert_eq!(find_magic_word(&even, &b).unwrap(), Word::from_digits("1"));
    }

    #[test]
    fn letters_are_magic_for_one_step_sfts() {
        let b = Budget::default();
        let golden = SoficPresentation::golden_mean();
        let w = find_magic_word(&golden, &b).unwrap();
        assert_eq!(w.len(), 1);
        let all = golden.all_vertices();
        for s in 0..2 {
            assert!(golden.read(&all, s).count_ones(..) <= 1);
        }
    }

    #[test]
    fn specification_lengths() {
        let b = Budget::default();
        assert_eq!(
            specification_length(&SoficPresentation::full_shift(2).unwrap(), &b).unwrap(),
            0
        );
        assert_eq!(specification_length(&SoficPresentation::golden_mean(), &b).unwrap(), 1);
        assert_eq!(specification_length(&SoficPresentation::even_shift(), &b).unwrap(), 2);
    }

    #[test]
    fn full_shift_constants() {
        let p = SoficPresentation::full_shift(2).unwrap();
        let phi = Potential::zero(Alphabet::binary());
        let c = magic_boundary_constants(&p, &phi, &Budget::default()).unwrap();
        assert_eq!(c.word, Word::from_digits("00"));
        assert_eq!(c.k, 1);
        assert!((c.epsilon - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.theta_x - 0.75).abs() < 1e-15);
        assert_eq!(c.m_x, 2);
        assert_eq!(c.c_x, 1.0);
    }

    #[test]
    fn even_shift_constants_are_finite() {
        let p = SoficPresentation::even_shift();
        let phi = Potential::zero(Alphabet::binary());
        let c = magic_boundary_constants(&p, &phi, &Budget::default()).unwrap();
        assert!(c.k > c.ell);
        assert!(c.theta_x > 0.0 && c.theta_x < 1.0);
        assert!(c.c_x.is_finite() && c.epsilon > 0.0);
    }
}
