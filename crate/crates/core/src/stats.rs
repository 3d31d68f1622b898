//! Small internal helpers for means and sample standard deviations.
//!
//! The sample (n - 1) convention is used everywhere in this crate; groups
//! of a dozen subjects are small enough that the distinction matters.

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator) around a precomputed mean.
pub(crate) fn sample_sd(values: &[f64], mean: f64) -> f64 {
    debug_assert!(values.len() >= 2);
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
