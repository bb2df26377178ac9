//! Transfer matrices and their certified Perron data.

mod matrix;
mod perron;
mod projective;

pub use matrix::{build_transfer, DenseMatrix, SparseMatrix, TransferMatrix, TransferMeta};
pub use perron::{perron, power_estimate, PerronData, PerronOptions};
pub use projective::{gamma_tau, projective_distance};
