//! JSON input files for presentations and potentials.
//!
//! A subshift file holds one of
//!
//! * `{"alphabet": [...], "vertices": [...], "edges": [[src, label, dst], ...]}`
//!   where vertices and labels are given by name or by index,
//! * `{"alphabet": [...], "forbidden": ["11", ...]}`,
//! * `{"beta_expansion_prefix": [...], "period": k}`.
//!
//! A potential file holds
//! `{"range": r, "table": {"word": value, ...}, "variation": {...}}`, with an
//! optional `"default"` value for words missing from the table. Without a
//! `"variation"` entry the tightest bound `C 2^{-m}` is derived from the
//! table.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::potential::{Potential, Variation};
use crate::symbolic::{Alphabet, SoficPresentation, Symbol, Word};
use crate::{Error, Result};

/// Vertex or symbol reference by name or by index.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Ref {
    Index(usize),
    Name(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubshiftFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    #[serde(default)]
    vertices: Option<Vec<String>>,
    #[serde(default)]
    edges: Option<Vec<(Ref, Ref, Ref)>>,
    #[serde(default)]
    forbidden: Option<Vec<String>>,
    #[serde(default)]
    beta_expansion_prefix: Option<Vec<u8>>,
    #[serde(default)]
    period: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialFile {
    #[serde(default)]
    name: Option<String>,
    range: usize,
    table: BTreeMap<String, f64>,
    #[serde(default)]
    default: Option<f64>,
    #[serde(default)]
    variation: Option<Variation>,
}

/// Raw bytes of an input file together with their SHA-256 digest.
#[derive(Debug, Clone)]
pub struct Input {
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_text(text))
    }

    pub fn from_text(text: String) -> Self {
        let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
        Self { text, sha256 }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidPresentation(msg.into())
}

fn resolve(r: &Ref, names: &[String], what: &str) -> Result<usize> {
    match r {
        Ref::Index(i) if *i < names.len() => Ok(*i),
        Ref::Index(i) => Err(invalid(format!("{what} index {i} out of range"))),
        Ref::Name(s) => names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| invalid(format!("unknown {what} {s:?}"))),
    }
}

/// Parses a subshift description.
pub fn parse_subshift(text: &str) -> Result<SoficPresentation> {
    let f: SubshiftFile = serde_json::from_str(text)?;
    let _ = f.name;
    if let Some(prefix) = f.beta_expansion_prefix {
        if f.alphabet.is_some() || f.edges.is_some() || f.forbidden.is_some() {
            return Err(invalid(
                "beta_expansion_prefix cannot be combined with alphabet, edges or forbidden",
            ));
        }
        return SoficPresentation::beta_shift(&prefix, f.period.unwrap_or(0));
    }
    if f.period.is_some() {
        return Err(invalid("period is only meaningful with beta_expansion_prefix"));
    }
    let names = f
        .alphabet
        .ok_or_else(|| invalid("missing alphabet"))?;
    let alphabet = Alphabet::new(names.clone())?;
    match (f.edges, f.forbidden) {
        (Some(edges), None) => {
            let vertices = f.vertices.ok_or_else(|| invalid("edges need vertices"))?;
            let edges = edges
                .iter()
                .map(|(s, l, d)| {
                    Ok((
                        resolve(s, &vertices, "vertex")?,
                        resolve(l, &names, "symbol")? as Symbol,
                        resolve(d, &vertices, "vertex")?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            SoficPresentation::new(alphabet, vertices, &edges)
        }
        (None, Some(forbidden)) => {
            if f.vertices.is_some() {
                return Err(invalid("vertices are not used with forbidden words"));
            }
            let words = forbidden
                .iter()
                .map(|w| alphabet.parse_word(w))
                .collect::<Result<Vec<Word>>>()?;
            SoficPresentation::from_forbidden(alphabet, &words)
        }
        (Some(_), Some(_)) => Err(invalid("give either edges or forbidden, not both")),
        (None, None) => Err(invalid("missing edges, forbidden or beta_expansion_prefix")),
    }
}

/// Parses a potential description over `alphabet`.
pub fn parse_potential(text: &str, alphabet: &Alphabet) -> Result<Potential> {
    let f: PotentialFile = serde_json::from_str(text)?;
    let _ = f.name;
    let size = alphabet.len();
    let total = size
        .checked_pow(f.range as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::InvalidPotential(format!("range {} is too large", f.range)))?;
    let mut table = vec![f.default; total];
    for (key, &value) in &f.table {
        let w = alphabet
            .parse_word(key)
            .map_err(|e| Error::InvalidPotential(format!("table key {key:?}: {e}")))?;
        if w.len() != f.range {
            return Err(Error::InvalidPotential(format!(
                "table key {key:?} has length {}, expected {}",
                w.len(),
                f.range
            )));
        }
        let code = w.iter().fold(0usize, |acc, &s| acc * size + s as usize);
        table[code] = Some(value);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                let mut digits = vec![0 as Symbol; f.range];
                let mut c = i;
                for d in digits.iter_mut().rev() {
                    *d = (c % size) as Symbol;
                    c /= size;
                }
                Error::InvalidPotential(format!(
                    "table misses word {:?} and no default is given",
                    alphabet.render(&digits)
                ))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let variation = match f.variation {
        Some(v) => v,
        None => derived_variation(alphabet, f.range, &table)?,
    };
    Potential::from_table(alphabet.clone(), f.range, table, variation)
}

/// Smallest `C` with `var_m <= C 2^{-m}` for the given table.
fn derived_variation(alphabet: &Alphabet, range: usize, table: &[f64]) -> Result<Variation> {
    let loose = Potential::from_table(
        alphabet.clone(),
        range,
        table.to_vec(),
        Variation::Exponential {
            c: 1e300,
            theta: 0.5,
        },
    )?;
    let c = (0..range)
        .map(|j| loose.exact_variation(j) * 2f64.powi(j as i32))
        .fold(0.0, f64::max);
    Ok(Variation::Exponential { c, theta: 0.5 })
}

pub fn load_subshift(path: &Path) -> Result<(SoficPresentation, Input)> {
    let input = Input::read(path)?;
    Ok((parse_subshift(&input.text)?, input))
}

pub fn load_potential(path: &Path, alphabet: &Alphabet) -> Result<(Potential, Input)> {
    let input = Input::read(path)?;
    Ok((parse_potential(&input.text, alphabet)?, input))
}
