//! Least-squares Gaussian fit to histogram frequencies.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::Histogram;

/// A Gaussian fitted to bin frequencies, with the achieved residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub mu: f64,
    pub sigma: f64,
    /// Sum of squared frequency residuals at the minimizer.
    pub residual: f64,
}

impl GaussianFit {
    /// Expected frequency of the bin `[left, right)` under the fit.
    pub fn bin_mass(&self, left: f64, right: f64) -> f64 {
        let normal = Normal::new(self.mu, self.sigma).expect("sigma > 0 by construction");
        (normal.cdf(right) - normal.cdf(left)).clamp(0.0, 1.0)
    }

    /// Density-scale frequency curve `bin_width * N(z; mu, sigma)`,
    /// useful for plotting the fit over histogram points.
    pub fn curve(&self, z: f64, bin_width: f64) -> f64 {
        let u = (z - self.mu) / self.sigma;
        bin_width * (-0.5 * u * u).exp()
            / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }
}

/// Fit a Gaussian to a histogram's frequencies by least squares.
///
/// The model for each bin is the Gaussian probability mass over the bin,
/// which for width-0.2 bins is the familiar `bin_width * N(center)` curve
/// up to a second-order correction; fitting the exact mass keeps the fit
/// unbiased against frequencies that are themselves bin probabilities.
/// The minimizer is found by Nelder-Mead over `(mu, ln sigma)`, seeded at
/// the frequency-weighted moments. At least 3 non-empty bins are required.
pub fn fit_gaussian_frequencies(hist: &Histogram) -> Result<GaussianFit> {
    let non_empty = hist.non_empty_bins();
    if non_empty < 3 {
        return Err(Error::InsufficientBins { needed: 3, got: non_empty });
    }

    let centers = hist.centers();
    let freqs: Vec<f64> = hist.bins.iter().map(|b| b.frequency).collect();
    let total: f64 = freqs.iter().sum();

    // Moment start: frequency-weighted mean and sd of bin centers.
    let mu0: f64 = centers.iter().zip(&freqs).map(|(c, f)| c * f).sum::<f64>() / total;
    let var0: f64 = centers
        .iter()
        .zip(&freqs)
        .map(|(c, f)| f * (c - mu0) * (c - mu0))
        .sum::<f64>()
        / total;
    let sigma0 = var0.sqrt().max(0.5 * hist.bin_width);

    let w = hist.bin_width;
    let objective = |p: &[f64; 2]| -> f64 {
        let (mu, sigma) = (p[0], p[1].exp());
        let normal = match Normal::new(mu, sigma) {
            Ok(n) => n,
            Err(_) => return f64::INFINITY,
        };
        hist.bins
            .iter()
            .map(|b| {
                let mass = normal.cdf(b.left_edge + w) - normal.cdf(b.left_edge);
                let r = mass - b.frequency;
                r * r
            })
            .sum()
    };

    let (best, residual) = nelder_mead(&objective, [mu0, sigma0.ln()], [0.5 * w, 0.5], 400);
    Ok(GaussianFit { mu: best[0], sigma: best[1].exp(), residual })
}

/// Minimal two-parameter Nelder-Mead with standard coefficients.
///
/// Good enough for the smooth, low-dimensional least-squares surfaces in
/// this crate; not a general-purpose optimizer.
fn nelder_mead(
    f: &dyn Fn(&[f64; 2]) -> f64,
    start: [f64; 2],
    step: [f64; 2],
    max_iter: usize,
) -> ([f64; 2], f64) {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut simplex: Vec<([f64; 2], f64)> = vec![
        (start, f(&start)),
        {
            let p = [start[0] + step[0], start[1]];
            (p, f(&p))
        },
        {
            let p = [start[0], start[1] + step[1]];
            (p, f(&p))
        },
    ];

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let (best, worst) = (simplex[0], simplex[2]);
        if (worst.1 - best.1).abs() < 1e-30
            && (worst.0[0] - best.0[0]).abs() < 1e-12
            && (worst.0[1] - best.0[1]).abs() < 1e-12
        {
            break;
        }

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let reflect = [
            centroid[0] + ALPHA * (centroid[0] - worst.0[0]),
            centroid[1] + ALPHA * (centroid[1] - worst.0[1]),
        ];
        let fr = f(&reflect);

        if fr < best.1 {
            let expand = [
                centroid[0] + GAMMA * (reflect[0] - centroid[0]),
                centroid[1] + GAMMA * (reflect[1] - centroid[1]),
            ];
            let fe = f(&expand);
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = [
                centroid[0] + RHO * (worst.0[0] - centroid[0]),
                centroid[1] + RHO * (worst.0[1] - centroid[1]),
            ];
            let fc = f(&contract);
            if fc < worst.1 {
                simplex[2] = (contract, fc);
            } else {
                for entry in simplex.iter_mut().skip(1) {
                    let p = [
                        best.0[0] + SIGMA * (entry.0[0] - best.0[0]),
                        best.0[1] + SIGMA * (entry.0[1] - best.0[1]),
                    ];
                    *entry = (p, f(&p));
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
    simplex[0]
}
