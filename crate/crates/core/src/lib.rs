//! Gibbs measures on specified sofic subshifts, computed through their
//! nested finite-type approximations.
//!
//! A sofic subshift `X` is given as a right-resolving labeled graph
//! ([`SoficPresentation`]). For every order `m` the subshift of finite type
//! `X_m` determined by the admissible words of length `m + 1` is built
//! ([`SftApproximation`]). A locally constant [`Potential`] then yields
//! nonnegative transfer matrices on the words of `X_m` ([`TransferMatrix`]).
//! Their Perron data ([`PerronData`]) is extracted by power iteration in the
//! projective (Hilbert) metric, with an error radius that comes from the
//! Birkhoff contraction coefficient rather than from heuristics.
//!
//! On top of the Perron data the [`gibbs`] module evaluates cylinder
//! measures, topological pressure, entropy, relative entropy, weak distances,
//! Gibbs-ratio certificates and mixing ratios. Every quantity that has an
//! independent route (periodic-orbit enumeration versus transfer-matrix
//! algebra) exposes both so they can be checked against each other.
//!
//! ```
//! use sofic_gibbs::prelude::*;
//!
//! let golden = SoficPresentation::golden_mean();
//! let budget = Budget::default();
//! let phi = Potential::zero(golden.alphabet().clone());
//! let model = GibbsModel::build(&golden, &phi, 3, None, &budget).unwrap();
//! let pressure = model.pressure();
//! let g = (1.0 + 5f64.sqrt()) / 2.0;
//! assert!((pressure.value - g.ln()).abs() < 1e-10);
//! ```

// Negated comparisons are used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod cli;
pub mod error;
pub mod gibbs;
pub mod io;
pub mod potential;
pub mod symbolic;
pub mod transfer;

pub use budget::Budget;
pub use error::{Error, Result};
pub use gibbs::{CylinderMeasure, Estimate, GibbsModel, PressureEstimate};
pub use potential::{Potential, Variation};
pub use symbolic::{Alphabet, PeriodicSet, SftApproximation, SoficPresentation, Symbol, Word};
pub use transfer::{PerronData, PerronOptions, TransferMatrix};

/// Glob import for examples and downstream experiments.
pub mod prelude {
    pub use crate::budget::Budget;
    pub use crate::error::{Error, Result};
    pub use crate::gibbs::{
        self, elementary_measure, elementary_via_trace, elementary_via_trace_all, entropy, gibbs_cylinder,
        gibbs_ratio_certificate, markov_extend, mixing_ratio, mixing_ratio_direct, pressure,
        pressure_gap, relative_entropy, weak_distance, CylinderMeasure, Estimate, GibbsModel,
        PressureEstimate, ProofConstants,
    };
    pub use crate::potential::{birkhoff_sum, finite_range, Potential, Variation};
    pub use crate::symbolic::{
        admissible_words, build_sft, enumerate_periodic, find_magic_word,
        magic_boundary_constants, specification_length, Alphabet, PeriodicSet,
        SftApproximation, SoficPresentation, Word,
    };
    pub use crate::transfer::{
        build_transfer, gamma_tau, perron, power_estimate, projective_distance, PerronData,
        PerronOptions, TransferMatrix,
    };
}
