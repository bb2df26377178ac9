//! Measure-level quantities: elementary periodic-orbit measures, Gibbs
//! cylinder measures, pressure, entropy, weak distances, Gibbs-ratio
//! certificates, mixing ratios and convergence studies.

mod bounds;
mod distance;
mod elementary;
mod entropy;
mod markov;
mod measure;
mod mixing;
mod model;
mod study;

pub use bounds::ProofConstants;
pub use distance::{gibbs_ratio_certificate, weak_distance, RatioCertificate};
pub use elementary::{elementary_measure, elementary_via_trace, elementary_via_trace_all};
pub use entropy::{entropy, relative_entropy, EntropyReport};
pub use markov::{gibbs_cylinder, markov_extend, pressure, PressureEstimate};
pub use measure::{Cell, CylinderMeasure, Estimate, MeasureProvenance};
pub use mixing::{mixing_ratio, mixing_ratio_direct};
pub use model::{default_depth, default_period, pressure_gap, GibbsModel};
pub use study::{
    convergence_study, fit_log_rate, ConvergenceStudy, RateFit, StudyOptions, StudyRow,
    GAP_NOISE_FLOOR,
};
