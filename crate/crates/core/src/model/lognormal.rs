//! Log-normal population parameters, density, fitting, and the
//! post-influence (posterior) parameter relations.

use crate::error::{Error, Result};
use crate::model::Estimate;
use crate::stats;

/// Location/scale of a log-normal estimate population.
///
/// `mu` and `sigma` live in the log domain: if answers are `x`, then
/// `ln x ~ Normal(mu, sigma)`. The population median is `exp(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalParams {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be finite, got {mu}")));
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(LogNormalParams { mu, sigma })
    }

    /// Population median, `exp(mu)`; always positive.
    pub fn median(&self) -> f64 {
        self.mu.exp()
    }
}

/// Log-normal density at `x`.
///
/// Requires a strictly positive scale; a zero scale makes the density a
/// point mass and is rejected as [`Error::DegenerateScale`].
pub fn lognormal_pdf(x: Estimate, params: &LogNormalParams) -> Result<f64> {
    if params.sigma == 0.0 {
        return Err(Error::DegenerateScale);
    }
    let z = (x.ln() - params.mu) / params.sigma;
    let norm = x.value() * params.sigma * (2.0 * std::f64::consts::PI).sqrt();
    Ok((-0.5 * z * z).exp() / norm)
}

/// Fit population parameters by Gaussian MLE on the logs.
///
/// `mu` is the mean of logs; `sigma` the sample (n - 1) standard
/// deviation of logs. At least two distinct values are required.
pub fn fit_lognormal_mle(values: &[Estimate]) -> Result<LogNormalParams> {
    if values.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: values.len() });
    }
    let first = values[0];
    if values.iter().all(|v| v.value() == first.value()) {
        return Err(Error::ZeroVariance);
    }
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mu = stats::mean(&logs);
    let sigma = stats::sample_sd(&logs, mu);
    if sigma == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(LogNormalParams { mu, sigma })
}

/// Parameters of the post-influence population.
///
/// A subject mixing a private population `(mu_p, sigma_p)` with a social
/// signal `mu_s` at weight `w_s` (private weight `1 - w_s`) lands on
///
/// ```text
/// mu_f    = (1 - w_s) * mu_p + w_s * mu_s
/// sigma_f = sqrt(1 - w_s) * sigma_p
/// ```
///
/// The relations hold only for `w_s` in [0, 1]; anything outside is
/// rejected as [`Error::WeightOutOfRange`].
pub fn posterior_params(private: &LogNormalParams, mu_s: f64, w_s: f64) -> Result<LogNormalParams> {
    if !(0.0..=1.0).contains(&w_s) {
        return Err(Error::WeightOutOfRange { value: w_s });
    }
    if !mu_s.is_finite() {
        return Err(Error::InvalidParameter(format!("mu_s must be finite, got {mu_s}")));
    }
    Ok(LogNormalParams {
        mu: (1.0 - w_s) * private.mu + w_s * mu_s,
        sigma: (1.0 - w_s).sqrt() * private.sigma,
    })
}
