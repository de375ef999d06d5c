//! Monte-Carlo study of how record-linkage errors distort vaccine-safety estimates.
//!
//! The pipeline per replication is
//!
//! 1. [`sim::simulate_cohort`] generates exact vaccination and event histories,
//! 2. [`linkage`] removes vaccination records (missing matches) and swaps them between
//!    people (false matches),
//! 3. [`estimators`] fits a Cox model with time-varying exposure and a self-controlled
//!    case series to the perturbed data,
//! 4. [`harness`] aggregates bias, MSE and power over replications and scenarios.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod linkage;
pub mod sim;

pub use error::{Error, EstimationError, Result};
