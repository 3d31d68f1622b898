//! Collective estimation with social-influence awareness.
//!
//! A crowd's answers to a numeric question are modelled as a log-normal
//! population. Between two trials each subject sees a social signal and
//! mixes it with their private answer in the log domain; inverting that
//! mixture recovers a per-subject social weight. Filtering to subjects
//! whose weight is near zero — the ones confident in their own estimate —
//! and aggregating only their first answers corrects the bias that plain
//! crowd statistics suffer from.
//!
//! The crate is organized along the pipeline:
//!
//! * [`model`] — log-normal populations, crowd aggregates, standardization,
//!   histograms, Gaussian frequency fits and coverage bands;
//! * [`weights`] — social signals, the forward update rule and per-subject
//!   weight recovery;
//! * [`filter`] — the omega sweep over weight thresholds and extraction of
//!   a single bias-corrected estimate;
//! * [`sim`] — a seeded generator of synthetic two-trial experiments for
//!   end-to-end verification.
//!
//! # Example
//!
//! Simulate a crowd whose suggestible members are also the misinformed
//! ones, recover everyone's social weight from the two trials, and
//! compare the plain geometric mean with the filtered trend estimate:
//!
//! ```
//! use confident_crowd::filter::{confident_estimate, sweep, ExtractionMethod, OmegaGrid};
//! use confident_crowd::model::{aggregate, Aggregator, Estimate};
//! use confident_crowd::sim::{simulate_experiment, SimConfig, WeightMixture};
//! use confident_crowd::weights::{social_signal, social_weight, Condition, SubjectResponse};
//!
//! let config = SimConfig {
//!     truth: 734.0,
//!     sigma_p: 0.8,
//!     bias_slope: -1.87,
//!     mixture: WeightMixture::default(),
//!     n_groups: 100,
//!     group_size: 12,
//!     condition: Condition::AggregatedMean,
//!     seed: 33,
//! };
//! let data = simulate_experiment(&config).unwrap();
//!
//! // recover each subject's social weight from the two trials
//! let mut subjects = Vec::new();
//! for g in 0..config.n_groups as u32 {
//!     let group: Vec<_> = data.subjects.iter().filter(|s| s.group == g).collect();
//!     let first: Vec<Estimate> =
//!         group.iter().map(|s| Estimate::new(s.x1).unwrap()).collect();
//!     let signal = social_signal(config.condition, &first).unwrap();
//!     for (s, &x1) in group.iter().zip(&first) {
//!         let resp = SubjectResponse { x1, x2: Estimate::new(s.x2).unwrap(), signal };
//!         subjects.push((x1, social_weight(&resp)));
//!     }
//! }
//!
//! // the full crowd is badly biased; the filtered trend is not
//! let valid: Vec<Estimate> =
//!     subjects.iter().filter(|(_, w)| w.is_valid()).map(|&(x, _)| x).collect();
//! let crowd = aggregate(&valid, Aggregator::GeometricMean).unwrap();
//! let points =
//!     sweep(&subjects, &OmegaGrid::default_grid(), Aggregator::GeometricMean, 5).unwrap();
//! let confident = confident_estimate(
//!     &points,
//!     5,
//!     ExtractionMethod::TrendIntercept,
//!     Aggregator::GeometricMean,
//! )
//! .unwrap();
//! assert!((crowd / 734.0_f64).ln().abs() > 0.5);
//! assert!((confident.value / 734.0_f64).ln().abs() < 0.1);
//! ```

pub mod error;
pub mod filter;
pub mod model;
pub mod sim;
pub mod weights;

mod stats;

pub use error::{Error, Result};
