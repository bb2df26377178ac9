use serde::{Deserialize, Serialize};

/// Size limits shared by every enumeration and dense computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Maximum number of words held in any enumerated language level.
    pub max_words: usize,
    /// Maximum number of subset-automaton states explored (magic words,
    /// specification length).
    pub max_subsets: usize,
    /// Largest matrix dimension for which dense powers are formed.
    pub dense_limit: usize,
    /// Power-iteration cap.
    pub max_iterations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_words: 1_000_000,
            max_subsets: 1 << 16,
            dense_limit: 2000,
            max_iterations: 200_000,
        }
    }
}

impl Budget {
    pub(crate) fn check_words(&self, what: &'static str, size: usize) -> crate::Result<()> {
        if size > self.max_words {
            return Err(crate::Error::BudgetExceeded {
                what,
                size,
                budget: self.max_words,
            });
        }
        Ok(())
    }
}
