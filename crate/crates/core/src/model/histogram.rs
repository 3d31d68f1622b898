//! Frequency histograms with bins anchored at zero.
//!
//! Bins are half-open `[left, right)` intervals of fixed width with an
//! edge at 0, so bin membership is deterministic and reproducible across
//! runs: a value sitting exactly on a right edge falls into the next bin.

use crate::error::{Error, Result};

/// One histogram bin: its left edge and its relative frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left_edge: f64,
    pub frequency: f64,
}

/// A frequency histogram over contiguous, zero-anchored bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    /// Left edge of the bin containing 0 (always 0 under zero anchoring).
    pub origin: f64,
    /// Contiguous bins ordered by left edge; interior bins may be empty.
    pub bins: Vec<HistogramBin>,
    /// Number of samples counted.
    pub n: usize,
}

impl Histogram {
    /// Bin centers, in bin order.
    pub fn centers(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.left_edge + 0.5 * self.bin_width).collect()
    }

    /// The `len + 1` bin edges, in increasing order.
    pub fn edges(&self) -> Vec<f64> {
        let mut edges: Vec<f64> = self.bins.iter().map(|b| b.left_edge).collect();
        if let Some(last) = self.bins.last() {
            edges.push(last.left_edge + self.bin_width);
        }
        edges
    }

    pub fn non_empty_bins(&self) -> usize {
        self.bins.iter().filter(|b| b.frequency > 0.0).count()
    }
}

/// Build a zero-anchored frequency histogram of `values`.
///
/// Frequencies are counts divided by `values.len()`, so they sum to 1.
pub fn build_histogram(values: &[f64], bin_width: f64) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive and finite, got {bin_width}"
        )));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite value {bad}")));
    }

    let index = |v: f64| (v / bin_width).floor() as i64;
    let k_min = values.iter().map(|&v| index(v)).min().expect("non-empty");
    let k_max = values.iter().map(|&v| index(v)).max().expect("non-empty");

    // guard against a stray extreme value requesting absurd allocations
    const MAX_BINS: i64 = 1_000_000;
    if k_max - k_min + 1 > MAX_BINS {
        return Err(Error::InvalidParameter(format!(
            "value range needs {} bins of width {bin_width}; limit is {MAX_BINS}",
            k_max - k_min + 1
        )));
    }

    let mut counts = vec![0usize; (k_max - k_min + 1) as usize];
    for &v in values {
        counts[(index(v) - k_min) as usize] += 1;
    }

    let n = values.len();
    let bins = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| HistogramBin {
            left_edge: (k_min + i as i64) as f64 * bin_width,
            frequency: c as f64 / n as f64,
        })
        .collect();

    Ok(Histogram { bin_width, origin: 0.0, bins, n })
}
