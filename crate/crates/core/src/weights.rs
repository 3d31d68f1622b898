//! Social signals and per-subject social weights.
//!
//! Between the first and second trial, subjects see a summary of their
//! group's answers and fold it into a revised estimate in the log
//! domain:
//!
//! ```text
//! ln x2 = (1 - w_s) * ln x1 + w_s * mu_s
//! ```
//!
//! Inverting that update gives each subject's social weight
//!
//! ```text
//! w_s = (ln x2 - ln x1) / (mu_s - ln x1)
//! ```
//!
//! which is the quantity the whole filtering pipeline keys on. A subject
//! whose first answer already coincides with the signal carries no
//! information about their weight; that case is reported as
//! [`SocialWeight::UndefinedSignal`] rather than as an error, because
//! real data contains such ties.

use crate::error::{Error, Result};
use crate::model::{build_histogram, Estimate, Histogram};

/// Relative tolerance below which `mu_s - ln x1` is treated as zero.
///
/// Set at the double-precision round-off scale of a log.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// What a group was shown between trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// No information between trials.
    Control,
    /// The arithmetic mean of the group's previous estimates.
    AggregatedMean,
    /// All individual estimates (summarized here by their log-domain center).
    FullInformation,
}

/// The log-domain scalar shown to every member of a group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SocialSignal {
    pub mu_s: f64,
    pub condition: Condition,
}

/// A subject's recovered social weight.
///
/// Valid weights may lie outside [0, 1]: subjects sometimes overshoot the
/// signal or move away from it, and only the filtering stage decides what
/// to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SocialWeight {
    Valid(f64),
    /// The first estimate coincides with the signal; the weight is
    /// unidentifiable and the subject is excluded from weight analyses.
    UndefinedSignal,
}

impl SocialWeight {
    pub fn value(self) -> Option<f64> {
        match self {
            SocialWeight::Valid(w) => Some(w),
            SocialWeight::UndefinedSignal => None,
        }
    }

    pub fn is_valid(self) -> bool {
        matches!(self, SocialWeight::Valid(_))
    }
}

/// A subject's two estimates and the signal they saw in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubjectResponse {
    pub x1: Estimate,
    pub x2: Estimate,
    pub signal: SocialSignal,
}

/// The signal shown to a group, derived from its first-trial estimates.
///
/// * `AggregatedMean`: log of the arithmetic mean of all first estimates,
///   the subject's own included, so every group member sees the same
///   value. The arithmetic mean of a log-normal population exceeds its
///   median, so this signal shifts answers upward.
/// * `FullInformation`: the mean of the log estimates, i.e. the log-domain
///   center of what was displayed, which leaves the group median in place.
/// * `Control`: no signal exists; requesting one is an error.
pub fn social_signal(condition: Condition, group_trial1: &[Estimate]) -> Result<SocialSignal> {
    if condition == Condition::Control {
        return Err(Error::NoSignalInControl);
    }
    if group_trial1.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = group_trial1.len() as f64;
    let mu_s = match condition {
        Condition::AggregatedMean => {
            (group_trial1.iter().map(|e| e.value()).sum::<f64>() / n).ln()
        }
        Condition::FullInformation => group_trial1.iter().map(|e| e.ln()).sum::<f64>() / n,
        Condition::Control => unreachable!(),
    };
    Ok(SocialSignal { mu_s, condition })
}

/// Forward integration of private estimate and social signal.
///
/// Returns `exp((1 - w_s) ln x1 + w_s mu_s)`, which is positive whenever
/// the exponent is finite; an exponent overflowing `f64` is rejected.
pub fn second_estimate(x1: Estimate, mu_s: f64, w_s: f64) -> Result<Estimate> {
    let log_x2 = (1.0 - w_s) * x1.ln() + w_s * mu_s;
    Estimate::new(log_x2.exp())
}

/// Recover the social weight from a subject's before/after estimates,
/// with the default degeneracy tolerance.
pub fn social_weight(resp: &SubjectResponse) -> SocialWeight {
    social_weight_with_tol(resp, DEGENERACY_TOL)
}

/// Recover the social weight with an explicit degeneracy tolerance.
///
/// If `|mu_s - ln x1| <= tol * max(1, |mu_s|, |ln x1|)` the denominator is
/// a round-off away from zero and the weight is reported as
/// [`SocialWeight::UndefinedSignal`].
pub fn social_weight_with_tol(resp: &SubjectResponse, tol: f64) -> SocialWeight {
    let log_x1 = resp.x1.ln();
    let mu_s = resp.signal.mu_s;
    let denom = mu_s - log_x1;
    if denom.abs() <= tol * 1.0_f64.max(mu_s.abs()).max(log_x1.abs()) {
        return SocialWeight::UndefinedSignal;
    }
    SocialWeight::Valid((resp.x2.ln() - log_x1) / denom)
}

/// A weight histogram plus the count of subjects it had to exclude.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightHistogram {
    pub histogram: Histogram,
    /// Subjects whose weight was undefined and therefore not binned.
    pub n_undefined: usize,
}

/// Histogram the valid weights (bins of `bin_width` anchored at 0).
pub fn weight_histogram(weights: &[SocialWeight], bin_width: f64) -> Result<WeightHistogram> {
    let valid: Vec<f64> = weights.iter().filter_map(|w| w.value()).collect();
    if valid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n_undefined = weights.len() - valid.len();
    Ok(WeightHistogram { histogram: build_histogram(&valid, bin_width)?, n_undefined })
}
