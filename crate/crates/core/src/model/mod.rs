//! Distribution primitives for crowds of estimators.
//!
//! Estimate populations are modelled as log-normal: the logarithm of a
//! subject's answer is Gaussian with location `mu` and scale `sigma`, so
//! the population median `exp(mu)` indexes collective knowledge and
//! `sigma` indexes diversity. This module provides the pieces of the
//! standard analysis pipeline over such populations:
//!
//! * [`lognormal_pdf`], [`fit_lognormal_mle`] and [`posterior_params`]
//!   for the distributions before and after social influence,
//! * [`aggregate`] for the classic crowd statistics (mean, median,
//!   geometric mean),
//! * [`standardize_logs`] and [`build_histogram`] to pool questions with
//!   different units onto a common z-score axis,
//! * [`fit_gaussian_frequencies`] and [`coverage_band`] to fit the pooled
//!   frequencies and bound where experiments are expected to land.
//!
//! All operations are pure functions of their inputs and are safe to call
//! concurrently.

mod aggregate;
mod band;
mod gaussian_fit;
mod histogram;
mod lognormal;
mod standardize;

pub use aggregate::{aggregate, Aggregator};
pub use band::{coverage_band, BandInterval, CoverageBand};
pub use gaussian_fit::{fit_gaussian_frequencies, GaussianFit};
pub use histogram::{build_histogram, Histogram, HistogramBin};
pub use lognormal::{fit_lognormal_mle, lognormal_pdf, posterior_params, LogNormalParams};
pub use standardize::{standardize_logs, StandardizedSample};

use crate::error::{Error, Result};

/// A single positive, finite estimate in the units of its question.
///
/// Positivity is enforced at construction so that every downstream
/// operation may take logarithms without checking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate(f64);

impl Estimate {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Estimate(value))
        } else {
            Err(Error::NonPositiveEstimate { value })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Natural log of the estimate; always finite by construction.
    pub fn ln(self) -> f64 {
        self.0.ln()
    }
}

/// Convert a slice of raw values, rejecting the first invalid one.
pub fn estimates_from(values: &[f64]) -> Result<Vec<Estimate>> {
    values.iter().map(|&v| Estimate::new(v)).collect()
}
