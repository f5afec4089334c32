//! Confidence regions from pivots and the sets that beat them.
//!
//! The crate builds fiducial (confidence-distribution) region estimators,
//! Bayesian credible regions, and a dominating set estimator for the
//! two-point Gaussian model, then checks coverage and expected region size
//! by exact acceptance-set masses and by seeded Monte Carlo.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod models;
pub mod numfmt;
pub mod regions;
pub mod specfun;

pub use error::{Error, Result};
