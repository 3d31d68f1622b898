//! Per-question standardization of log-estimates.
//!
//! Questions have wildly different units (kilometres, murders, inhabitants),
//! so pooling them requires mapping each question's log-estimates to
//! z-scores: subtract the mean of the logs, divide by their standard
//! deviation. The sample (n - 1) convention is used.

use crate::error::{Error, Result};
use crate::model::Estimate;
use crate::stats;

/// Z-scores of a question's log-estimates plus the transform that made them.
///
/// `source_mu` and `source_sd` allow mapping any z back to the original
/// units via [`StandardizedSample::invert`].
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedSample {
    pub zscores: Vec<f64>,
    pub source_mu: f64,
    pub source_sd: f64,
}

impl StandardizedSample {
    /// Map a z-score back to the original estimate units.
    pub fn invert(&self, z: f64) -> f64 {
        (self.source_mu + z * self.source_sd).exp()
    }
}

/// Standardize the logs of at least two non-identical estimates.
pub fn standardize_logs(values: &[Estimate]) -> Result<StandardizedSample> {
    if values.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: values.len() });
    }
    let first = values[0];
    if values.iter().all(|v| v.value() == first.value()) {
        return Err(Error::ZeroVariance);
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mu = stats::mean(&logs);
    let sd = stats::sample_sd(&logs, mu);
    if sd == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let zscores = logs.iter().map(|l| (l - mu) / sd).collect();
    Ok(StandardizedSample { zscores, source_mu: mu, source_sd: sd })
}
