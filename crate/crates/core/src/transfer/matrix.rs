use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;

use crate::potential::Potential;
use crate::symbolic::{SftApproximation, Symbol, Word};
use crate::{Budget, Error, Result};

/// Nonnegative square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from per-row `(column, value)` lists. Zero and
    /// negative values are rejected.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (j, v) in row {
                if j >= dim {
                    return Err(Error::DimensionMismatch { left: j, right: dim });
                }
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!(
                        "matrix entries must be positive and finite, got {v}"
                    )));
                }
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    /// Builds a matrix from dense rows, dropping zeros.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let sparse = rows
            .iter()
            .map(|r| {
                if r.len() != dim {
                    return Err(Error::DimensionMismatch {
                        left: r.len(),
                        right: dim,
                    });
                }
                Ok(r.iter()
                    .enumerate()
                    .filter(|e| *e.1 != 0.0)
                    .map(|(j, &v)| (j, v))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(sparse)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzero entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `y = Mᵀ x`.
    pub fn mul_vec_transpose(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                y[j] += v * xi;
            }
        }
        y
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.dim];
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                rows[j].push((i, v));
            }
        }
        SparseMatrix::from_rows(rows).expect("transpose of a valid matrix")
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> SparseMatrix {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                d.set(i, j, v);
            }
        }
        d
    }
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: r.len(),
                    right: dim,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0.0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().cloned().fold(0.0, f64::max)
    }

    /// `self · m` for sparse `m`, computed row by row in parallel.
    pub fn mul_sparse(&self, m: &SparseMatrix) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        out.data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (j, v) in m.row(k) {
                    row[j] += a * v;
                }
            }
        });
        out
    }

    /// `self · other`.
    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        out.data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (r, &b) in row.iter_mut().zip(other.row(k)) {
                    *r += a * b;
                }
            }
        });
        out
    }

    /// Divides every entry by its largest entry and returns the log of the
    /// factor removed.
    pub fn normalize(&mut self) -> f64 {
        let m = self.max_entry();
        if m > 0.0 {
            self.data.iter_mut().for_each(|v| *v /= m);
            m.ln()
        } else {
            0.0
        }
    }

    /// `M^k` divided by a positive scalar, together with the log of that
    /// scalar, so that `M^k = exp(log_scale) · result`.
    pub fn scaled_power(m: &SparseMatrix, k: usize) -> (DenseMatrix, f64) {
        let mut acc = DenseMatrix::identity(m.dim());
        let mut log_scale = 0.0;
        for _ in 0..k {
            acc = acc.mul_sparse(m);
            log_scale += acc.normalize();
        }
        (acc, log_scale)
    }
}

/// Metadata of a transfer matrix.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TransferMeta {
    /// Order of the SFT approximation.
    pub m: usize,
    /// Index words have length `n + 1`.
    pub n: usize,
    /// Content hash of the potential.
    pub potential_id: String,
}

/// The transfer matrix `M_{(m,n)}` on the `X_m`-admissible words of length
/// `n + 1`, with entry `exp(φ^{n+1}(a b(n)))` when `a(1:n) = b(0:n-1)`.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    matrix: SparseMatrix,
    index: Vec<Word>,
    lookup: HashMap<Word, usize>,
    meta: TransferMeta,
}

/// Builds `M_{(m,n)}`.
///
/// For `n >= m` the index graph presents `X_m` exactly. Smaller `n` is
/// accepted and yields the matrix of the `(n + 2)`-block approximation.
pub fn build_transfer(
    sft: &SftApproximation,
    n: usize,
    phi: &Potential,
    budget: &Budget,
) -> Result<TransferMatrix> {
    let m = sft.order();
    if phi.alphabet() != sft.alphabet() {
        return Err(Error::InvalidPotential(
            "potential and subshift use different alphabets".into(),
        ));
    }
    let index = sft.words_of_length(n + 1, budget)?;
    let lookup: HashMap<Word, usize> =
        index.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let size = sft.alphabet().len() as Symbol;
    let rows: Vec<Vec<(usize, f64)>> = index
        .par_iter()
        .map(|a| {
            let mut ext: Vec<Symbol> = a.to_vec();
            ext.push(0);
            let mut row = Vec::new();
            for s in 0..size {
                *ext.last_mut().expect("nonempty") = s;
                let allowed = if n >= m {
                    sft.can_extend(a, s)
                } else {
                    sft.is_admissible(&ext)
                };
                if !allowed {
                    continue;
                }
                if let Some(&j) = lookup.get(&ext[1..]) {
                    let value = phi.finite_range(n + 1, &ext).expect("validated word");
                    row.push((j, value.exp()));
                }
            }
            row
        })
        .collect();
    let matrix = SparseMatrix::from_rows(rows)?;
    Ok(TransferMatrix {
        matrix,
        index,
        lookup,
        meta: TransferMeta {
            m,
            n,
            potential_id: phi.id().to_string(),
        },
    })
}

impl TransferMatrix {
    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn meta(&self) -> &TransferMeta {
        &self.meta
    }

    /// Index words in lexicographic order.
    pub fn index(&self) -> &[Word] {
        &self.index
    }

    pub fn index_of(&self, word: &[Symbol]) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    /// Writes `row-word col-word value` lines, one per nonzero entry.
    pub fn dump_coo(&self, alphabet: &crate::symbolic::Alphabet, out: &mut impl Write) -> Result<()> {
        for (i, a) in self.index.iter().enumerate() {
            for (j, v) in self.matrix.row(i) {
                writeln!(
                    out,
                    "{} {} {:.17e}",
                    alphabet.render(a),
                    alphabet.render(&self.index[j]),
                    v
                )?;
            }
        }
        Ok(())
    }
}

impl std::ops::Deref for TransferMatrix {
    type Target = SparseMatrix;
    fn deref(&self) -> &SparseMatrix {
        &self.matrix
    }
}
