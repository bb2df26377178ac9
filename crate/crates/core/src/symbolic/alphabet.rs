use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index of a symbol inside its [`Alphabet`].
pub type Symbol = u8;

/// Ordered finite set of distinct symbol names.
///
/// The order of the names fixes the lexicographic order on words, which in
/// turn fixes every index used by the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    names: Vec<String>,
    compact: bool,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::InvalidPresentation(format!(
                "alphabet needs at least 2 symbols, got {}",
                names.len()
            )));
        }
        if names.len() > 255 {
            return Err(Error::InvalidPresentation(
                "alphabet is limited to 255 symbols".into(),
            ));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || a.contains(',') || a.chars().any(char::is_whitespace) {
                return Err(Error::InvalidPresentation(format!(
                    "symbol {a:?} must be nonempty without commas or whitespace"
                )));
            }
            if names[..i].contains(a) {
                return Err(Error::InvalidPresentation(format!("duplicate symbol {a:?}")));
            }
        }
        let compact = names.iter().all(|s| s.chars().count() == 1);
        Ok(Self { names, compact })
    }

    /// The alphabet `{0, 1, ..., size - 1}` with decimal names.
    pub fn numeric(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn binary() -> Self {
        Self::numeric(2).expect("two symbols")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::WordNotAdmissible(format!("unknown symbol {name:?}")))
    }

    /// Parses a word. Single-character alphabets use plain concatenation
    /// (`"0110"`), other alphabets use commas (`"10,2,10"`).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let symbols = if self.compact && !text.contains(',') {
            text.chars()
                .map(|c| self.symbol(c.encode_utf8(&mut [0; 4])))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',')
                .map(|s| self.symbol(s.trim()))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(symbols))
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        let sep = if self.compact { "" } else { "," };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Checks that every symbol of `word` belongs to the alphabet.
    pub fn validate(&self, word: &[Symbol]) -> Result<()> {
        match word.iter().find(|&&s| s as usize >= self.len()) {
            Some(s) => Err(Error::WordNotAdmissible(format!(
                "symbol index {s} outside alphabet of size {}",
                self.len()
            ))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.names
    }
}

/// Finite word `a(0:n)` of symbol indices. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    /// Inclusive slice `a(i:j)`.
    pub fn sub(&self, i: usize, j: usize) -> Word {
        Word(self.0[i..=j].to_vec())
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn pushed(&self, s: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(s);
        Word(v)
    }

    /// Parses a word over the symbols `0..=9` written as digits.
    pub fn from_digits(text: &str) -> Word {
        Word(
            text.bytes()
                .map(|b| {
                    assert!(b.is_ascii_digit(), "digit words only");
                    b - b'0'
                })
                .collect(),
        )
    }

    /// All words of the given length over an alphabet of `size` symbols, in
    /// lexicographic order.
    pub fn all(size: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..size as Symbol).map(move |s| w.pushed(s)))
                .collect();
        }
        out
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl std::ops::Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|&s| s < 10);
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(if compact { "" } else { "," }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        let a = Alphabet::binary();
        let w = a.parse_word("0110").unwrap();
        assert_eq!(w.as_slice(), &[0, 1, 1, 0]);
        assert_eq!(a.render(&w), "0110");

        let wide = Alphabet::new(["x", "yy", "z"]).unwrap();
        let w = wide.parse_word("yy,x,z").unwrap();
        assert_eq!(w.as_slice(), &[1, 0, 2]);
        assert_eq!(wide.render(&w), "yy,x,z");
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(["0"]).is_err());
        assert!(Alphabet::new(["0", "0"]).is_err());
        assert!(Alphabet::new(["a,b", "c"]).is_err());
    }

    #[test]
    fn unknown_symbol_is_reported() {
        let a = Alphabet::binary();
        assert!(matches!(a.parse_word("012"), Err(Error::WordNotAdmissible(_))));
    }

    #[test]
    fn words_order_lexicographically() {
        let words = Word::all(2, 2);
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(rendered, ["00", "01", "10", "11"]);
        assert!(Word::from_digits("0") < Word::from_digits("00"));
    }

    #[test]
    fn inclusive_slices() {
        let w = Word::from_digits("01234");
        assert_eq!(w.sub(1, 3), Word::from_digits("123"));
        assert_eq!(w.sub(2, 2).len(), 1);
    }
}
