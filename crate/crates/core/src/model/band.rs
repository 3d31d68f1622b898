//! Expected-coverage bands for histogram frequencies.
//!
//! Given a fitted Gaussian and a sample size `n`, each bin's observed
//! frequency is `K/n` with `K ~ Binomial(n, p)` where `p` is the bin's
//! probability mass under the fit. The band brackets the central
//! `coverage` mass of that exact finite-n sampling distribution.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::GaussianFit;

/// Frequency interval `[low, high]` expected for the bin at `left_edge`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInterval {
    pub left_edge: f64,
    pub low: f64,
    pub high: f64,
}

/// Per-bin frequency intervals at a common coverage level.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageBand {
    pub bins: Vec<BandInterval>,
    pub coverage: f64,
}

impl CoverageBand {
    /// Whether `frequency` lies inside the band of bin `i`.
    pub fn contains(&self, i: usize, frequency: f64) -> bool {
        let b = &self.bins[i];
        frequency >= b.low && frequency <= b.high
    }
}

/// Compute the coverage band for the bins described by `bin_edges`.
///
/// `bin_edges` are the `bins + 1` increasing edges of a contiguous
/// histogram (see [`Histogram::edges`](crate::model::Histogram::edges)).
/// For each bin the interval is `[q_lo/n, q_hi/n]` with `q_lo`, `q_hi`
/// the `(1-coverage)/2` and `1-(1-coverage)/2` quantiles of
/// `Binomial(n, p)`.
pub fn coverage_band(
    fit: &GaussianFit,
    bin_edges: &[f64],
    n: usize,
    coverage: f64,
) -> Result<CoverageBand> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".to_string()));
    }
    if !(coverage > 0.0 && coverage < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "coverage must lie in (0, 1), got {coverage}"
        )));
    }
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "bin edges must be at least 2 strictly increasing values".to_string(),
        ));
    }
    let normal = Normal::new(fit.mu, fit.sigma)
        .map_err(|_| Error::InvalidParameter(format!("bad fit scale {}", fit.sigma)))?;

    let alpha = 0.5 * (1.0 - coverage);
    let bins = bin_edges
        .windows(2)
        .map(|w| {
            let p = (normal.cdf(w[1]) - normal.cdf(w[0])).clamp(0.0, 1.0);
            let q_lo = binomial_quantile(n as u64, p, alpha);
            let q_hi = binomial_quantile(n as u64, p, 1.0 - alpha);
            BandInterval {
                left_edge: w[0],
                low: q_lo as f64 / n as f64,
                high: q_hi as f64 / n as f64,
            }
        })
        .collect();

    Ok(CoverageBand { bins, coverage })
}

/// Smallest `k` with `P(K <= k) >= level` for `K ~ Binomial(n, p)`.
///
/// The CDF is accumulated from log-domain PMF terms, which stays accurate
/// for the small-`n` histogram counts this crate works with.
fn binomial_quantile(n: u64, p: f64, level: f64) -> u64 {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!(level > 0.0 && level < 1.0);
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p(); // ln(1 - p) without cancellation
    let ln_n_fact = statrs::function::gamma::ln_gamma(n as f64 + 1.0);
    let mut cdf = 0.0;
    for k in 0..=n {
        let ln_choose = ln_n_fact
            - statrs::function::gamma::ln_gamma(k as f64 + 1.0)
            - statrs::function::gamma::ln_gamma((n - k) as f64 + 1.0);
        cdf += (ln_choose + k as f64 * ln_p + (n - k) as f64 * ln_q).exp();
        if cdf >= level {
            return k;
        }
    }
    n
}
