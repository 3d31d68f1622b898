//! Classic crowd aggregates of a set of estimates.

use crate::error::{Error, Result};
use crate::model::Estimate;

/// The three textbook collective statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregator {
    ArithmeticMean,
    Median,
    GeometricMean,
}

/// Aggregate a non-empty set of estimates.
///
/// The geometric mean is computed as `exp(mean of logs)`; the median of
/// an even-length list is the midpoint of the two central order
/// statistics. The result is always positive.
pub fn aggregate(values: &[Estimate], method: Aggregator) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    Ok(match method {
        Aggregator::ArithmeticMean => values.iter().map(|v| v.value()).sum::<f64>() / n,
        Aggregator::GeometricMean => (values.iter().map(|v| v.ln()).sum::<f64>() / n).exp(),
        Aggregator::Median => {
            let mut sorted: Vec<f64> = values.iter().map(|v| v.value()).collect();
            sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("estimates are finite"));
            let mid = sorted.len() / 2;
            if sorted.len() % 2 == 1 {
                sorted[mid]
            } else {
                0.5 * (sorted[mid - 1] + sorted[mid])
            }
        }
    })
}
