//! Error type shared by all modules of the crate.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the estimation pipeline.
///
/// Degenerate social signals are deliberately *not* represented here:
/// a signal that coincides with a subject's first estimate is an
/// expected data condition and is reported through
/// [`SocialWeight::UndefinedSignal`](crate::weights::SocialWeight).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A log-normal scale parameter of exactly zero where a positive one
    /// is required (the density is degenerate).
    DegenerateScale,
    /// An operation over a collection received no usable values.
    EmptyInput,
    /// An estimate must be a positive, finite real.
    NonPositiveEstimate { value: f64 },
    /// All values are identical; no spread to standardize or fit against.
    ZeroVariance,
    /// Too few values for the requested statistic.
    InsufficientData { needed: usize, got: usize },
    /// Too few non-empty histogram bins for a curve fit.
    InsufficientBins { needed: usize, got: usize },
    /// A social weight outside [0, 1] where the posterior relations
    /// are defined only on that range.
    WeightOutOfRange { value: f64 },
    /// Control subjects receive no social information; no signal exists.
    NoSignalInControl,
    /// No sweep point satisfies the minimum-selection requirement.
    NoFeasibleOmega,
    /// A configuration or argument value outside its documented domain.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateScale => write!(f, "scale parameter is zero; density is degenerate"),
            Error::EmptyInput => write!(f, "input contains no usable values"),
            Error::NonPositiveEstimate { value } => {
                write!(f, "estimate must be positive and finite, got {value}")
            }
            Error::ZeroVariance => write!(f, "all values are identical; variance is zero"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} values, got {got}")
            }
            Error::InsufficientBins { needed, got } => {
                write!(f, "need at least {needed} non-empty bins, got {got}")
            }
            Error::WeightOutOfRange { value } => {
                write!(f, "social weight {value} outside [0, 1]")
            }
            Error::NoSignalInControl => {
                write!(f, "control condition provides no social signal")
            }
            Error::NoFeasibleOmega => {
                write!(f, "no sweep point selects enough subjects")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
