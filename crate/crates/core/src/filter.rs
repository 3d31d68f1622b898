//! Filtering to socially-resistant subjects: the omega sweep.
//!
//! Subjects whose recovered social weight is large leaned on the group
//! signal; subjects with `|w| <= omega` mostly kept their own counsel.
//! Sweeping omega downward and aggregating the first-trial estimates of
//! the survivors traces a curve whose small-omega end is carried by the
//! confident subjects. Two rules extract a single estimate from that
//! curve: take the smallest feasible omega outright, or extrapolate the
//! trend of the curve to omega = 0.
//!
//! Everything here is pure and deterministic; selections at smaller
//! thresholds are subsets of selections at larger ones.

use crate::error::{Error, Result};
use crate::model::{aggregate, Aggregator, Estimate};
use crate::weights::SocialWeight;

/// A strictly decreasing schedule of positive thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaGrid {
    thresholds: Vec<f64>,
}

impl OmegaGrid {
    /// Default schedule: 41 log-spaced thresholds from 2.0 down to 0.02.
    pub const DEFAULT_MAX: f64 = 2.0;
    pub const DEFAULT_MIN: f64 = 0.02;
    pub const DEFAULT_STEPS: usize = 41;

    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::EmptyInput);
        }
        if thresholds.iter().any(|&t| !(t.is_finite() && t > 0.0)) {
            return Err(Error::InvalidParameter(
                "omega thresholds must be positive and finite".to_string(),
            ));
        }
        if thresholds.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter(
                "omega thresholds must be strictly decreasing".to_string(),
            ));
        }
        Ok(OmegaGrid { thresholds })
    }

    /// `steps` log-spaced thresholds from `omega_max` down to `omega_min`.
    pub fn logspaced(omega_max: f64, omega_min: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidParameter("need at least 2 steps".to_string()));
        }
        if !(omega_min > 0.0 && omega_max > omega_min && omega_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need omega_max > omega_min > 0, got {omega_max} and {omega_min}"
            )));
        }
        let ratio = omega_min / omega_max;
        let mut thresholds: Vec<f64> = (0..steps)
            .map(|k| omega_max * ratio.powf(k as f64 / (steps - 1) as f64))
            .collect();
        // pin the endpoints exactly
        thresholds[0] = omega_max;
        thresholds[steps - 1] = omega_min;
        Self::new(thresholds)
    }

    pub fn default_grid() -> Self {
        Self::logspaced(Self::DEFAULT_MAX, Self::DEFAULT_MIN, Self::DEFAULT_STEPS)
            .expect("default grid parameters are valid")
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }
}

/// The sweep curve at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub n_selected: usize,
    /// Aggregate of the selected first estimates; absent when fewer than
    /// the aggregation minimum survive.
    pub estimate: Option<f64>,
}

/// How a single estimate is extracted from a sweep curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMethod {
    /// The estimate at the smallest omega that still selects enough subjects.
    SmallestFeasibleOmega,
    /// Weighted least-squares line through (omega, ln estimate),
    /// evaluated at omega = 0 and exponentiated.
    TrendIntercept,
}

/// A single bias-corrected collective estimate and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidentEstimate {
    pub value: f64,
    /// Smallest omega that contributed (for the trend method, the smallest
    /// omega in the fit).
    pub omega_used: f64,
    /// Subjects selected at `omega_used`.
    pub n_used: usize,
    pub method: ExtractionMethod,
    pub aggregator: Aggregator,
}

/// Sweep the grid, aggregating first estimates of subjects with
/// `|w| <= omega`.
///
/// Subjects with an undefined weight are never selected. A point's
/// estimate is present only when at least `max(1, min_n)` subjects
/// survive. Selection preserves input order, so at a threshold selecting
/// everyone the estimate reproduces the plain crowd aggregate exactly.
pub fn sweep(
    subjects: &[(Estimate, SocialWeight)],
    grid: &OmegaGrid,
    aggregator: Aggregator,
    min_n: usize,
) -> Result<Vec<SweepPoint>> {
    if subjects.is_empty() {
        return Err(Error::EmptyInput);
    }
    let floor = min_n.max(1);
    Ok(grid
        .thresholds()
        .iter()
        .map(|&omega| {
            let selected: Vec<Estimate> = subjects
                .iter()
                .filter(|(_, w)| matches!(w.value(), Some(v) if v.abs() <= omega))
                .map(|&(x1, _)| x1)
                .collect();
            let n_selected = selected.len();
            let estimate = if n_selected >= floor {
                Some(aggregate(&selected, aggregator).expect("non-empty selection"))
            } else {
                None
            };
            SweepPoint { omega, n_selected, estimate }
        })
        .collect())
}

/// Extract one estimate from a sweep curve.
///
/// Only points with `n_selected >= min_n` and a present estimate are
/// considered feasible. For [`ExtractionMethod::TrendIntercept`] the line
/// fit weights each point by its `n_selected`.
pub fn confident_estimate(
    points: &[SweepPoint],
    min_n: usize,
    method: ExtractionMethod,
    aggregator: Aggregator,
) -> Result<ConfidentEstimate> {
    let feasible: Vec<&SweepPoint> = points
        .iter()
        .filter(|p| p.n_selected >= min_n.max(1) && p.estimate.is_some())
        .collect();
    let smallest = feasible
        .iter()
        .copied()
        .min_by(|a, b| a.omega.partial_cmp(&b.omega).expect("finite omega"))
        .ok_or(Error::NoFeasibleOmega)?;

    let value = match method {
        ExtractionMethod::SmallestFeasibleOmega => smallest.estimate.expect("feasible"),
        ExtractionMethod::TrendIntercept => {
            let total_weight: f64 = feasible.iter().map(|p| p.n_selected as f64).sum();
            let xm: f64 = feasible
                .iter()
                .map(|p| p.n_selected as f64 * p.omega)
                .sum::<f64>()
                / total_weight;
            let ym: f64 = feasible
                .iter()
                .map(|p| p.n_selected as f64 * p.estimate.expect("feasible").ln())
                .sum::<f64>()
                / total_weight;
            let sxx: f64 = feasible
                .iter()
                .map(|p| p.n_selected as f64 * (p.omega - xm) * (p.omega - xm))
                .sum();
            let intercept = if sxx == 0.0 {
                ym
            } else {
                let sxy: f64 = feasible
                    .iter()
                    .map(|p| {
                        p.n_selected as f64
                            * (p.omega - xm)
                            * (p.estimate.expect("feasible").ln() - ym)
                    })
                    .sum();
                ym - (sxy / sxx) * xm
            };
            intercept.exp()
        }
    };

    Ok(ConfidentEstimate {
        value,
        omega_used: smallest.omega,
        n_used: smallest.n_selected,
        method,
        aggregator,
    })
}

/// Absolute log-ratio error, `|ln(estimate / truth)|`.
///
/// Symmetric in its arguments and zero iff they agree.
pub fn log_error(estimate: f64, truth: f64) -> Result<f64> {
    for v in [estimate, truth] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonPositiveEstimate { value: v });
        }
    }
    Ok((estimate / truth).ln().abs())
}
