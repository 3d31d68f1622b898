//! Seeded synthetic experiments.
//!
//! Agents carry heterogeneous social weights drawn from a spiky mixture
//! (many at exactly 0 and exactly 1, a unimodal bulk in between, a few
//! outside [0, 1]). A knowledge-confidence coupling ties each agent's
//! private accuracy to its weight: the log of the first estimate is
//! centered at `ln(truth) + b * clamp(w, 0, 1)`, so at `b = 0` the crowd
//! is unbiased and at `b < 0` the socially-suggestible agents drag the
//! crowd downward while the `w = 0` agents stay on target. That makes
//! the filtering pipeline's central claim checkable end to end: the
//! omega -> 0 trend must approach the truth the full crowd misses.
//!
//! Generation is deterministic: each group draws from its own counter
//! stream of the master seed, so datasets are byte-identical for a given
//! config regardless of evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::Estimate;
use crate::weights::{second_estimate, social_signal, Condition};

/// Mixture the agents' social weights are drawn from.
///
/// With probability `p_zero` a weight is exactly 0; `p_one` exactly 1;
/// `p_out` uniform over `[-0.3, 0) U (1, 1.3]`; the remaining mass is
/// `Beta(shape, shape)` on (0, 1), symmetric about 0.5. The default
/// shape 2.625 gives the interior bulk a standard deviation of 0.2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightMixture {
    pub p_zero: f64,
    pub p_one: f64,
    pub p_out: f64,
    pub interior_shape: f64,
}

impl Default for WeightMixture {
    fn default() -> Self {
        WeightMixture { p_zero: 0.15, p_one: 0.10, p_out: 0.05, interior_shape: 2.625 }
    }
}

impl WeightMixture {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_zero", self.p_zero), ("p_one", self.p_one), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} must be in [0, 1], got {p}")));
            }
        }
        if self.p_zero + self.p_one + self.p_out > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "spike probabilities sum to {} > 1",
                self.p_zero + self.p_one + self.p_out
            )));
        }
        if !(self.interior_shape.is_finite() && self.interior_shape > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interior shape must be positive, got {}",
                self.interior_shape
            )));
        }
        Ok(())
    }

    /// `E[clamp(w, 0, 1)]`, in closed form.
    ///
    /// The zero spike and the negative out-of-range half clamp to 0; the
    /// one spike and the positive half clamp to 1; both the interior Beta
    /// and the clamped out-of-range mass average 0.5 by symmetry.
    pub fn mean_clamped(&self) -> f64 {
        let p_interior = 1.0 - self.p_zero - self.p_one - self.p_out;
        self.p_one + 0.5 * self.p_out + 0.5 * p_interior
    }
}

/// Generative parameters of a synthetic experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// True answer of the simulated question.
    pub truth: f64,
    /// Log-domain diversity of private estimates.
    pub sigma_p: f64,
    /// Knowledge-confidence coupling: log-bias per unit of clamped weight.
    pub bias_slope: f64,
    pub mixture: WeightMixture,
    pub n_groups: usize,
    pub group_size: usize,
    pub condition: Condition,
    pub seed: u64,
}

impl SimConfig {
    pub const DEFAULT_GROUP_SIZE: usize = 12;

    pub fn validate(&self) -> Result<()> {
        if !(self.truth.is_finite() && self.truth > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truth must be positive, got {}",
                self.truth
            )));
        }
        if !(self.sigma_p.is_finite() && self.sigma_p > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma_p must be positive, got {}",
                self.sigma_p
            )));
        }
        if !self.bias_slope.is_finite() {
            return Err(Error::InvalidParameter("bias slope must be finite".to_string()));
        }
        if self.n_groups < 1 {
            return Err(Error::InvalidParameter("need at least one group".to_string()));
        }
        if self.group_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "group size must be >= 2, got {}",
                self.group_size
            )));
        }
        self.mixture.validate()
    }
}

/// One simulated subject: both trials plus the generating ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSubject {
    pub group: u32,
    pub subject: u32,
    pub condition: Condition,
    pub x1: f64,
    pub x2: f64,
    pub w_true: f64,
}

/// A complete synthetic experiment in the ingestion schema, with the
/// per-subject ground-truth weights retained for verification.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub question_id: String,
    pub truth: f64,
    pub subjects: Vec<SimSubject>,
}

/// The RNG for one group: a counter stream of the master seed, so groups
/// are independent and may be generated in any order.
pub fn group_rng(seed: u64, group_index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(group_index as u64);
    rng
}

/// Draw `n` i.i.d. weights from the mixture.
pub fn draw_weights(mixture: &WeightMixture, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let interior = Beta::new(mixture.interior_shape, mixture.interior_shape)
        .expect("validated shape parameter");
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < mixture.p_zero {
                0.0
            } else if u < mixture.p_zero + mixture.p_one {
                1.0
            } else if u < mixture.p_zero + mixture.p_one + mixture.p_out {
                // magnitude in (0, 0.3]; low side lands in [-0.3, 0),
                // high side in (1, 1.3]
                let v = (1.0 - rng.gen::<f64>()) * 0.3;
                if rng.gen::<bool>() {
                    1.0 + v
                } else {
                    -v
                }
            } else {
                interior.sample(rng)
            }
        })
        .collect()
}

/// Draw first estimates for agents with the given weights.
///
/// Agent i's log estimate is Normal(ln(truth) + b * clamp(w_i, 0, 1),
/// sigma_p): out-of-range weights describe update behaviour, not
/// knowledge beyond the extremes, hence the clamp.
pub fn draw_first_estimates(
    config: &SimConfig,
    weights: &[f64],
    rng: &mut impl Rng,
) -> Vec<Estimate> {
    let noise = Normal::new(0.0, config.sigma_p).expect("validated sigma_p");
    let log_truth = config.truth.ln();
    weights
        .iter()
        .map(|w| {
            let center = log_truth + config.bias_slope * w.clamp(0.0, 1.0);
            Estimate::new((center + noise.sample(rng)).exp())
                .expect("finite log estimate for sane config")
        })
        .collect()
}

/// Simulate one group's two trials.
///
/// Non-control groups see their condition's social signal and update by
/// the forward integration rule. Control subjects still re-estimated, so
/// their second trial re-noises the first with a small private term
/// (sd `0.05 * sigma_p` in the log domain) rather than repeating it
/// exactly.
pub fn simulate_group(config: &SimConfig, group_index: u32, rng: &mut impl Rng) -> Vec<SimSubject> {
    let weights = draw_weights(&config.mixture, config.group_size, rng);
    let first = draw_first_estimates(config, &weights, rng);

    let second: Vec<f64> = match config.condition {
        Condition::Control => {
            let renoise = Normal::new(0.0, 0.05 * config.sigma_p).expect("validated sigma_p");
            first
                .iter()
                .map(|x1| (x1.ln() + renoise.sample(rng)).exp())
                .collect()
        }
        _ => {
            let signal =
                social_signal(config.condition, &first).expect("non-control, non-empty group");
            first
                .iter()
                .zip(&weights)
                .map(|(&x1, &w)| {
                    second_estimate(x1, signal.mu_s, w)
                        .expect("finite update for sane config")
                        .value()
                })
                .collect()
        }
    };

    first
        .iter()
        .zip(&second)
        .zip(&weights)
        .enumerate()
        .map(|(i, ((x1, &x2), &w_true))| SimSubject {
            group: group_index,
            subject: i as u32,
            condition: config.condition,
            x1: x1.value(),
            x2,
            w_true,
        })
        .collect()
}

/// Simulate the full experiment: `n_groups` independent groups ordered by
/// (group, subject). Identical configs produce identical datasets.
pub fn simulate_experiment(config: &SimConfig) -> Result<SyntheticDataset> {
    config.validate()?;
    let mut subjects = Vec::with_capacity(config.n_groups * config.group_size);
    for g in 0..config.n_groups {
        let mut rng = group_rng(config.seed, g as u32);
        subjects.extend(simulate_group(config, g as u32, &mut rng));
    }
    Ok(SyntheticDataset { question_id: "q1".to_string(), truth: config.truth, subjects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{social_weight, SocialSignal, SubjectResponse};

    fn test_config(condition: Condition) -> SimConfig {
        SimConfig {
            truth: 734.0,
            sigma_p: 0.8,
            bias_slope: -1.5,
            mixture: WeightMixture::default(),
            n_groups: 4,
            group_size: 12,
            condition,
            seed: 99,
        }
    }

    #[test]
    fn degenerate_mixtures_draw_their_spike() {
        let mut rng = group_rng(1, 0);
        let zeros = draw_weights(
            &WeightMixture { p_zero: 1.0, p_one: 0.0, p_out: 0.0, interior_shape: 2.625 },
            5,
            &mut rng,
        );
        assert_eq!(zeros, vec![0.0; 5]);
        let ones = draw_weights(
            &WeightMixture { p_zero: 0.0, p_one: 1.0, p_out: 0.0, interior_shape: 2.625 },
            3,
            &mut rng,
        );
        assert_eq!(ones, vec![1.0; 3]);
    }

    #[test]
    fn spike_frequencies_match_mixture() {
        // law of large numbers at n = 10,000; +/- 0.02 is a 4-sigma bound
        let mixture = WeightMixture::default();
        let mut rng = group_rng(2024, 0);
        let ws = draw_weights(&mixture, 10_000, &mut rng);
        let f_zero = ws.iter().filter(|&&w| w == 0.0).count() as f64 / 10_000.0;
        let f_one = ws.iter().filter(|&&w| w == 1.0).count() as f64 / 10_000.0;
        let f_out = ws.iter().filter(|&&w| !(0.0..=1.0).contains(&w)).count() as f64 / 10_000.0;
        assert!((f_zero - 0.15).abs() < 0.02, "f_zero = {f_zero}");
        assert!((f_one - 0.10).abs() < 0.02, "f_one = {f_one}");
        assert!((f_out - 0.05).abs() < 0.02, "f_out = {f_out}");
    }

    #[test]
    fn out_of_range_draws_stay_in_their_bands() {
        let mixture = WeightMixture { p_zero: 0.0, p_one: 0.0, p_out: 1.0, interior_shape: 2.625 };
        let mut rng = group_rng(7, 0);
        for w in draw_weights(&mixture, 2_000, &mut rng) {
            assert!(
                (-0.3..0.0).contains(&w) || (1.0 < w && w <= 1.3),
                "out-of-range draw {w} outside its bands"
            );
        }
    }

    #[test]
    fn mean_clamped_default_mixture() {
        assert!((WeightMixture::default().mean_clamped() - 0.475).abs() < 1e-15);
    }

    #[test]
    fn vanishing_diversity_collapses_onto_truth() {
        let config = SimConfig {
            bias_slope: 0.0,
            sigma_p: 1e-12,
            ..test_config(Condition::AggregatedMean)
        };
        let mut rng = group_rng(1, 0);
        for e in draw_first_estimates(&config, &vec![0.3; 100], &mut rng) {
            assert!((e.value() / 734.0 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn unbiased_agent_is_centered_on_truth() {
        // b = -1.5, w = 0: coupling term vanishes; check the log-mean
        let config = test_config(Condition::AggregatedMean);
        let mut rng = group_rng(5, 0);
        let estimates = draw_first_estimates(&config, &vec![0.0; 20_000], &mut rng);
        let mean_log: f64 =
            estimates.iter().map(|e| e.ln()).sum::<f64>() / estimates.len() as f64;
        // se = 0.8 / sqrt(20000) ~ 0.0057; allow 4 se
        assert!((mean_log - 734.0_f64.ln()).abs() < 0.023, "mean log = {mean_log}");
    }

    #[test]
    fn crowd_bias_matches_analytic_coupling() {
        // full-crowd geometric mean ~= truth * exp(b * E[clamp(w, 0, 1)])
        let config = SimConfig { n_groups: 1000, ..test_config(Condition::AggregatedMean) };
        let mut rng = group_rng(config.seed, 0);
        let weights = draw_weights(&config.mixture, 12_000, &mut rng);
        let estimates = draw_first_estimates(&config, &weights, &mut rng);
        let geomean =
            (estimates.iter().map(|e| e.ln()).sum::<f64>() / estimates.len() as f64).exp();
        let expected = 734.0 * (-1.5 * config.mixture.mean_clamped()).exp();
        assert!(
            (geomean / expected - 1.0).abs() < 0.03,
            "geomean = {geomean}, expected ~{expected}"
        );
    }

    #[test]
    fn full_information_with_full_weights_collapses_to_log_center() {
        let config = SimConfig {
            mixture: WeightMixture { p_zero: 0.0, p_one: 1.0, p_out: 0.0, interior_shape: 2.625 },
            ..test_config(Condition::FullInformation)
        };
        let mut rng = group_rng(config.seed, 3);
        let records = simulate_group(&config, 3, &mut rng);
        let mean_log_x1: f64 =
            records.iter().map(|r| r.x1.ln()).sum::<f64>() / records.len() as f64;
        for r in &records {
            assert!((r.x2.ln() - mean_log_x1).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_weights_leave_estimates_unchanged() {
        let config = SimConfig {
            mixture: WeightMixture { p_zero: 1.0, p_one: 0.0, p_out: 0.0, interior_shape: 2.625 },
            ..test_config(Condition::AggregatedMean)
        };
        let mut rng = group_rng(config.seed, 0);
        for r in simulate_group(&config, 0, &mut rng) {
            assert!((r.x2 / r.x1 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recovered_weights_round_trip_through_the_forward_rule() {
        for condition in [Condition::AggregatedMean, Condition::FullInformation] {
            let config = test_config(condition);
            let data = simulate_experiment(&config).unwrap();
            for g in 0..config.n_groups as u32 {
                let group: Vec<&SimSubject> =
                    data.subjects.iter().filter(|s| s.group == g).collect();
                let first: Vec<Estimate> =
                    group.iter().map(|s| Estimate::new(s.x1).unwrap()).collect();
                let signal = social_signal(condition, &first).unwrap();
                for s in &group {
                    let resp = SubjectResponse {
                        x1: Estimate::new(s.x1).unwrap(),
                        x2: Estimate::new(s.x2).unwrap(),
                        signal: SocialSignal { mu_s: signal.mu_s, condition },
                    };
                    if let Some(w) = social_weight(&resp).value() {
                        assert!(
                            (w - s.w_true).abs() < 1e-9,
                            "recovered {w} vs stored {}",
                            s.w_true
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn control_groups_renoise_instead_of_updating() {
        let config = test_config(Condition::Control);
        let data = simulate_experiment(&config).unwrap();
        for s in &data.subjects {
            assert_ne!(s.x1, s.x2);
            // re-noise is small: 0.05 * sigma_p = 0.04 in the log domain
            assert!((s.x2.ln() - s.x1.ln()).abs() < 0.04 * 6.0);
        }
    }

    #[test]
    fn identical_configs_produce_identical_datasets() {
        let config = test_config(Condition::AggregatedMean);
        let a = simulate_experiment(&config).unwrap();
        let b = simulate_experiment(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let config = test_config(Condition::AggregatedMean);
        let other = SimConfig { seed: config.seed + 1, ..config.clone() };
        let a = simulate_experiment(&config).unwrap();
        let b = simulate_experiment(&other).unwrap();
        assert!(a.subjects.iter().zip(&b.subjects).any(|(x, y)| x.x1 != y.x1));
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        let good = test_config(Condition::Control);
        assert!(good.validate().is_ok());
        assert!(SimConfig { truth: -1.0, ..good.clone() }.validate().is_err());
        assert!(SimConfig { sigma_p: 0.0, ..good.clone() }.validate().is_err());
        assert!(SimConfig { group_size: 1, ..good.clone() }.validate().is_err());
        assert!(SimConfig { n_groups: 0, ..good.clone() }.validate().is_err());
        let bad_mix = WeightMixture { p_zero: 0.6, p_one: 0.5, p_out: 0.0, interior_shape: 2.625 };
        assert!(SimConfig { mixture: bad_mix, ..good }.validate().is_err());
    }
}
