use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::{Budget, Error, Result};

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting of a run. Each field can come from a flag or from the
/// JSON config file; flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Subshift JSON file.
    #[arg(long, global = true)]
    pub subshift: Option<PathBuf>,
    /// Potential JSON file. The zero potential is used when absent.
    #[arg(long, global = true)]
    pub potential: Option<PathBuf>,
    /// Order of the finite-type approximation.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Several orders, e.g. `1..8` (inclusive) or `1,2,5`.
    #[arg(long = "m-range", global = true)]
    pub m_range: Option<String>,
    /// Cylinder depth: measure depth, weak-distance cutoff K, or block
    /// entropy depth, depending on the command.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Transfer-matrix depth n (default `max(m, r - 1) + 2`).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Period p for elementary periodic-orbit measures.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Power-iteration tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// First word of a mixing query.
    #[arg(long, global = true)]
    pub a: Option<String>,
    /// Second word of a mixing query.
    #[arg(long, global = true)]
    pub b: Option<String>,
    /// Mixing gaps, e.g. `2`, `2,4,8` or `1..10`.
    #[arg(long, global = true)]
    pub s: Option<String>,
    /// Block-entropy depth of `converge`.
    #[arg(long = "block-depth", global = true)]
    pub block_depth: Option<usize>,
    /// Also write the transfer matrix in coordinate format (`pressure`).
    #[arg(long = "dump-matrix", global = true)]
    pub dump_matrix: Option<bool>,
    /// Budget: most words held in one language level (default 1000000).
    #[arg(long = "max-words", global = true)]
    pub max_words: Option<usize>,
    /// Budget: most subset-automaton states explored (default 65536).
    #[arg(long = "max-subsets", global = true)]
    pub max_subsets: Option<usize>,
    /// Budget: largest dimension for dense matrix powers (default 2000).
    #[arg(long = "dense-limit", global = true)]
    pub dense_limit: Option<usize>,
    /// Budget: power-iteration cap (default 200000).
    #[arg(long = "max-iterations", global = true)]
    pub max_iterations: Option<usize>,
}

macro_rules! overlay {
    ($flags:ident, $base:ident, $($f:ident),*) => {
        RunConfig { $($f: $flags.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    /// Fills unset fields of `self` from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        let flags = self;
        overlay!(
            flags, base, subshift, potential, m, m_range, depth, n, p, tol, out, format, a, b,
            s, block_depth, dump_matrix, max_words, max_subsets, dense_limit, max_iterations
        )
    }

    /// Reads a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: RunConfig = serde_json::from_str(&text)?;
        let dir = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.subshift, &mut cfg.potential, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn budget(&self) -> Result<Budget> {
        let d = Budget::default();
        let b = Budget {
            max_words: self.max_words.unwrap_or(d.max_words),
            max_subsets: self.max_subsets.unwrap_or(d.max_subsets),
            dense_limit: self.dense_limit.unwrap_or(d.dense_limit),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
        };
        if b.max_words == 0 || b.max_subsets == 0 || b.dense_limit == 0 || b.max_iterations == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        Ok(b)
    }

    pub fn tolerance(&self) -> Result<f64> {
        let tol = self.tol.unwrap_or(1e-12);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
        }
        Ok(tol)
    }

    /// Orders requested through `--m-range` or `--m`, else `default`.
    pub fn orders(&self, default: &[usize]) -> Result<Vec<usize>> {
        let ms = match (&self.m_range, self.m) {
            (Some(r), _) => parse_list(r, "m-range")?,
            (None, Some(m)) => vec![m],
            (None, None) => default.to_vec(),
        };
        if ms.is_empty() {
            return Err(Error::Config("m range is empty".into()));
        }
        Ok(ms)
    }
}

/// Parses `"3"`, `"1,2,5"`, `"1..8"`, `"1..=8"` or `"1-8"` (ranges are
/// inclusive) into a sorted list without duplicates.
pub fn parse_list(text: &str, what: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse {what} {text:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let bounds = part
            .split_once("..=")
            .or_else(|| part.split_once(".."))
            .or_else(|| part.split_once('-'));
        match bounds {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
