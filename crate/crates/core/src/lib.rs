//! Whale Optimization Algorithm instrumented with dimension-wise diversity
//! measurement.
//!
//! Every iteration of the optimizer can be observed through an
//! [`woa::IterationHook`]; the [`diversity`] module turns the observed
//! positions into per-iteration exploration (XPL%) and exploitation (XPT%)
//! percentages. [`benchmarks`] bundles the 23 classical test functions and the
//! ten CEC2019 functions, and [`harness`] runs repeated seeded experiments and
//! writes CSV reports, curve data and trace files.

pub mod benchmarks;
pub mod diversity;
pub mod domain;
pub mod error;
pub mod harness;
pub mod rng;
pub mod trace;
pub mod woa;

pub use error::{Error, Result};
