use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::alphabet::{Alphabet, Symbol, Word};
use super::presentation::SoficPresentation;
use crate::{Budget, Error, Result};

/// Labels of all length-`n + 1` paths of `p`, sorted and deduplicated.
///
/// Uses the default [`Budget`]; see [`admissible_words_within`] to set one.
pub fn admissible_words(p: &SoficPresentation, n: usize) -> Vec<Word> {
    admissible_words_within(p, n, &Budget {
        max_words: usize::MAX,
        ..Budget::default()
    })
    .expect("unbounded budget")
}

/// Labels of all length-`n + 1` paths of `p`, failing once a level exceeds
/// `budget.max_words`.
pub fn admissible_words_within(
    p: &SoficPresentation,
    n: usize,
    budget: &Budget,
) -> Result<Vec<Word>> {
    let size = p.alphabet().len() as Symbol;
    // Each word carries the set of vertices where a path with its label ends.
    let mut level: Vec<(Word, FixedBitSet)> = vec![(Word::empty(), p.all_vertices())];
    for _ in 0..=n {
        let mut grown = Vec::with_capacity(level.len() * 2);
        for (w, ends) in &level {
            for s in 0..size {
                let image = p.read(ends, s);
                if !image.is_clear() {
                    grown.push((w.pushed(s), image));
                }
            }
        }
        budget.check_words("admissible words", grown.len())?;
        level = grown;
    }
    Ok(level.into_iter().map(|(w, _)| w).collect())
}

/// The subshift of finite type `X_m` determined by a set of allowed words of
/// length `m + 1`, with the overlap transition rule `a(1:m) = b(0:m-1)`.
#[derive(Debug, Clone)]
pub struct SftApproximation {
    alphabet: Alphabet,
    order: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    successors: Vec<Vec<usize>>,
}

/// Builds the order-`m` finite type approximation of the subshift presented
/// by `p`.
pub fn build_sft(p: &SoficPresentation, m: usize, budget: &Budget) -> Result<SftApproximation> {
    let words = admissible_words_within(p, m, budget)?;
    SftApproximation::from_words(p.alphabet().clone(), m, words)
}

impl SftApproximation {
    /// Builds the SFT whose allowed words of length `order + 1` are `words`.
    pub fn from_words(alphabet: Alphabet, order: usize, mut words: Vec<Word>) -> Result<Self> {
        for w in &words {
            if w.len() != order + 1 {
                return Err(Error::InvalidPresentation(format!(
                    "word {w} has length {} but order {order} needs {}",
                    w.len(),
                    order + 1
                )));
            }
            alphabet.validate(w)?;
        }
        words.sort();
        words.dedup();
        if words.is_empty() {
            return Err(Error::InvalidPresentation("empty word list".into()));
        }
        let index: HashMap<Word, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let size = alphabet.len() as Symbol;
        let successors = words
            .iter()
            .map(|w| {
                let mut buf: Vec<Symbol> = w[1..].to_vec();
                buf.push(0);
                (0..size)
                    .filter_map(|s| {
                        *buf.last_mut().expect("nonempty") = s;
                        index.get(buf.as_slice()).copied()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            alphabet,
            order,
            words,
            index,
            successors,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The order `m`; allowed words have length `m + 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The allowed words `L_m`, sorted.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &[Symbol]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Indices of the allowed words that may follow word `i`.
    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    /// Whether `word` occurs in some point of `X_m`.
    pub fn is_admissible(&self, word: &[Symbol]) -> bool {
        let w = self.order + 1;
        if word.len() >= w {
            word.windows(w).all(|win| self.index.contains_key(win))
        } else {
            let pos = self.words.partition_point(|x| x.as_slice() < word);
            pos < self.words.len() && self.words[pos].starts_with(word)
        }
    }

    /// Whether the symbol `s` may follow the finite word `word` (which must be
    /// admissible and have length at least `m`).
    pub fn can_extend(&self, word: &[Symbol], s: Symbol) -> bool {
        let m = self.order;
        let mut buf: Vec<Symbol> = word[word.len() - m..].to_vec();
        buf.push(s);
        self.index.contains_key(buf.as_slice())
    }

    /// All `X_m`-admissible words of the given length, sorted.
    pub fn words_of_length(&self, len: usize, budget: &Budget) -> Result<Vec<Word>> {
        let w = self.order + 1;
        if len <= w {
            let mut out: Vec<Word> = self.words.iter().map(|x| Word::from(&x[..len])).collect();
            out.dedup();
            return Ok(out);
        }
        let size = self.alphabet.len() as Symbol;
        let mut level = self.words.clone();
        for _ in w..len {
            let mut grown = Vec::with_capacity(level.len() * 2);
            for word in &level {
                for s in 0..size {
                    if self.can_extend(word, s) {
                        grown.push(word.pushed(s));
                    }
                }
            }
            budget.check_words("X_m words", grown.len())?;
            level = grown;
        }
        Ok(level)
    }

    /// `X_m`-admissible words of length `n + 1`.
    pub fn admissible_words(&self, n: usize, budget: &Budget) -> Result<Vec<Word>> {
        self.words_of_length(n + 1, budget)
    }

    /// Number of closed walks of length `len` in the overlap graph, which is
    /// the trace of the `len`-th power of the 0/1 transition matrix. Counts
    /// saturate at `u128::MAX`.
    pub fn trace_count(&self, len: usize) -> u128 {
        let n = self.len();
        let mut total: u128 = 0;
        for start in 0..n {
            let mut counts = vec![0u128; n];
            counts[start] = 1;
            for _ in 0..len {
                let mut next = vec![0u128; n];
                for (i, &c) in counts.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for &j in &self.successors[i] {
                        next[j] = next[j].saturating_add(c);
                    }
                }
                counts = next;
            }
            total = total.saturating_add(counts[start]);
        }
        total
    }
}
