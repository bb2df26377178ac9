//! Alphabets, words, sofic presentations and their finite type
//! approximations.

mod alphabet;
mod magic;
mod periodic;
mod presentation;
mod sft;

pub use alphabet::{Alphabet, Symbol, Word};
pub use magic::{find_magic_word, magic_boundary_constants, specification_length, MagicConstants};
pub use periodic::{enumerate_periodic, PeriodicSet};
pub use presentation::SoficPresentation;
pub use sft::{admissible_words, admissible_words_within, build_sft, SftApproximation};
