//! Acceptance suite: one test per pipeline-level requirement, each
//! printing a PASS line (visible with `--nocapture`) so a run doubles as
//! a checklist.
//!
//! ```sh
//! cargo test -p confident-crowd --test acceptance -- --nocapture
//! ```

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ContinuousCDF, Normal as StatNormal};

use confident_crowd::filter::{
    confident_estimate, log_error, sweep, ExtractionMethod, OmegaGrid,
};
use confident_crowd::model::{
    aggregate, build_histogram, coverage_band, fit_gaussian_frequencies, fit_lognormal_mle,
    posterior_params, standardize_logs, Aggregator, Estimate, GaussianFit, Histogram,
    HistogramBin, LogNormalParams,
};
use confident_crowd::sim::{
    draw_weights, group_rng, simulate_experiment, SimConfig, WeightMixture,
};
use confident_crowd::weights::{
    social_signal, social_weight, weight_histogram, Condition, SocialSignal, SocialWeight,
    SubjectResponse,
};

fn est(v: f64) -> Estimate {
    Estimate::new(v).unwrap()
}

#[test]
fn criterion_01_forward_inverse_round_trip() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut max_err = 0.0f64;
    let mut done = 0;
    while done < 10_000 {
        let log_x1: f64 = rng.gen_range(-5.0..5.0);
        let mu_s: f64 = rng.gen_range(-5.0..5.0);
        if (mu_s - log_x1).abs() <= 1e-6 {
            continue;
        }
        let w: f64 = rng.gen_range(-2.0..2.0);
        let x1 = est(log_x1.exp());
        let x2 = confident_crowd::weights::second_estimate(x1, mu_s, w).unwrap();
        let resp = SubjectResponse {
            x1,
            x2,
            signal: SocialSignal { mu_s, condition: Condition::AggregatedMean },
        };
        let recovered = social_weight(&resp).value().expect("separated signal");
        max_err = max_err.max((recovered - w).abs());
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(max_err < 1e-9, "max round-trip error {max_err}");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance 01 (round trip, 10k draws): PASS (max err {max_err:.2e}, {:.0} ms)",
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_02_posterior_relations() {
    let private = LogNormalParams::new(1.3, 0.9).unwrap();
    let mu_s = 3.7;
    for w in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let post = posterior_params(&private, mu_s, w).unwrap();
        let mu_expected = (1.0 - w) * private.mu + w * mu_s;
        let sigma_expected = (1.0 - w).sqrt() * private.sigma;
        assert!((post.mu - mu_expected).abs() < 1e-12);
        assert!((post.sigma - sigma_expected).abs() < 1e-12);
        // convexity: mu_f between mu_p and mu_s
        assert!(post.mu >= private.mu.min(mu_s) - 1e-12);
        assert!(post.mu <= private.mu.max(mu_s) + 1e-12);
    }
    println!("acceptance 02 (posterior relations at 5 weights): PASS");
}

#[test]
fn criterion_03_deterministic_shrinkage() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let noise = Normal::new(500.0f64.ln(), 0.7).unwrap();
    let first: Vec<Estimate> = (0..1_000).map(|_| est(noise.sample(&mut rng).exp())).collect();
    let mu_s = 420.0f64.ln();
    let log_x1: Vec<f64> = first.iter().map(|e| e.ln()).collect();
    let log_x2: Vec<f64> = first
        .iter()
        .map(|&x1| confident_crowd::weights::second_estimate(x1, mu_s, 0.5).unwrap().ln())
        .collect();
    let before = common::sample_sd(&log_x1);
    let after = common::sample_sd(&log_x2);
    assert!(
        (after - 0.5 * before).abs() < 1e-12,
        "sd after {after} vs half of {before}"
    );
    println!("acceptance 03 (sd halves at w = 0.5 over 1000 subjects): PASS");
}

#[test]
fn criterion_04_lognormal_fit_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gen = Normal::new(2.0f64, 0.5).unwrap();
    let values: Vec<Estimate> = (0..10_000).map(|_| est(gen.sample(&mut rng).exp())).collect();
    let fit = fit_lognormal_mle(&values).unwrap();
    assert!((fit.mu - 2.0).abs() <= 0.02, "mu = {}", fit.mu);
    assert!((fit.sigma - 0.5).abs() <= 0.02, "sigma = {}", fit.sigma);
    println!(
        "acceptance 04 (MLE at n = 10k): PASS (mu {:.4}, sigma {:.4})",
        fit.mu, fit.sigma
    );
}

/// Ideal histogram whose frequencies are exact Gaussian bin masses over
/// [-4, 4]; the generator is the oracle the fit must invert.
fn ideal_gaussian_histogram(mu: f64, sigma: f64, width: f64, n: usize) -> Histogram {
    let normal = StatNormal::new(mu, sigma).unwrap();
    let k_min = (-4.0 / width).round() as i64;
    let k_max = (4.0 / width).round() as i64;
    let bins: Vec<HistogramBin> = (k_min..k_max)
        .map(|k| {
            let left = k as f64 * width;
            HistogramBin {
                left_edge: left,
                frequency: normal.cdf(left + width) - normal.cdf(left),
            }
        })
        .collect();
    Histogram { bin_width: width, origin: 0.0, bins, n }
}

#[test]
fn criterion_05_figure_pipeline_self_consistency() {
    // standardized trial-1 data: mean 0, sd 1 within 1e-12
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let noise = Normal::new(734.0f64.ln(), 0.8).unwrap();
    let values: Vec<Estimate> = (0..144).map(|_| est(noise.sample(&mut rng).exp())).collect();
    let std = standardize_logs(&values).unwrap();
    let mean = std.zscores.iter().sum::<f64>() / std.zscores.len() as f64;
    assert!(mean.abs() < 1e-12);
    assert!((common::sample_sd(&std.zscores) - 1.0).abs() < 1e-12);

    // histogram frequencies sum to 1
    let hist = build_histogram(&std.zscores, 0.2).unwrap();
    let total: f64 = hist.bins.iter().map(|b| b.frequency).sum();
    assert!((total - 1.0).abs() < 1e-12);

    // noiseless fit recovery within 1e-3
    let fit = fit_gaussian_frequencies(&ideal_gaussian_histogram(0.0, 1.0, 0.2, 144)).unwrap();
    assert!(fit.mu.abs() < 1e-3, "mu = {}", fit.mu);
    assert!((fit.sigma - 1.0).abs() < 1e-3, "sigma = {}", fit.sigma);
    println!(
        "acceptance 05 (standardize/histogram/fit): PASS (fit mu {:.2e}, sigma-1 {:.2e})",
        fit.mu,
        fit.sigma - 1.0
    );
}

#[test]
fn criterion_06_coverage_band_calibration() {
    // Band for N(0,1) over [-4, 4] bins at n = 144, then 1000 standardized
    // samples; the fraction of (sample, bin) pairs inside should sit near
    // the nominal 90%.
    let n = 144usize;
    let width = 0.2;
    let fit = GaussianFit { mu: 0.0, sigma: 1.0, residual: 0.0 };
    let layout = ideal_gaussian_histogram(0.0, 1.0, width, n);
    let edges = layout.edges();
    let band = coverage_band(&fit, &edges, n, 0.9).unwrap();
    let k_min = (edges[0] / width).round() as i64;
    let n_bins = band.bins.len();

    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let noise = Normal::new(0.0f64, 1.0).unwrap();
    let mut inside = 0usize;
    let mut total = 0usize;
    for _ in 0..1_000 {
        let raw: Vec<Estimate> = (0..n).map(|_| est(noise.sample(&mut rng).exp())).collect();
        let z = standardize_logs(&raw).unwrap().zscores;
        let mut counts = vec![0usize; n_bins];
        for &v in &z {
            let k = (v / width).floor() as i64 - k_min;
            if (0..n_bins as i64).contains(&k) {
                counts[k as usize] += 1;
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            if band.contains(i, c as f64 / n as f64) {
                inside += 1;
            }
            total += 1;
        }
    }
    let fraction = inside as f64 / total as f64;
    assert!(
        (0.87..=0.93).contains(&fraction),
        "fraction inside band = {fraction}"
    );
    println!("acceptance 06 (band calibration): PASS (fraction {fraction:.4})");
}

/// The full analysis path on a simulated dataset: recompute signals from
/// the stored first estimates, recover weights, pool across groups.
fn recover_subjects(
    data: &confident_crowd::sim::SyntheticDataset,
    condition: Condition,
    n_groups: u32,
) -> Vec<(Estimate, SocialWeight)> {
    let mut subjects = Vec::new();
    for g in 0..n_groups {
        let group: Vec<_> = data.subjects.iter().filter(|s| s.group == g).collect();
        let first: Vec<Estimate> = group.iter().map(|s| est(s.x1)).collect();
        let signal = social_signal(condition, &first).unwrap();
        for (s, &x1) in group.iter().zip(&first) {
            let resp = SubjectResponse { x1, x2: est(s.x2), signal };
            subjects.push((x1, social_weight(&resp)));
        }
    }
    subjects
}

#[test]
fn criterion_07_end_to_end_bias_elimination() {
    let start = Instant::now();
    let mixture = WeightMixture::default();
    // coupling chosen so the expected full-crowd bias matches ln(302/734)
    let b = (302.0f64 / 734.0).ln() / mixture.mean_clamped();
    let config = SimConfig {
        truth: 734.0,
        sigma_p: 0.8,
        bias_slope: b,
        mixture,
        n_groups: 100,
        group_size: 12,
        condition: Condition::AggregatedMean,
        seed: 33,
    };
    let data = simulate_experiment(&config).unwrap();
    let subjects = recover_subjects(&data, Condition::AggregatedMean, 100);

    // (a) the full crowd is badly biased
    let valid: Vec<Estimate> = subjects
        .iter()
        .filter(|(_, w)| w.is_valid())
        .map(|&(x, _)| x)
        .collect();
    let crowd = aggregate(&valid, Aggregator::GeometricMean).unwrap();
    let crowd_err = log_error(crowd, 734.0).unwrap();
    assert!(crowd_err >= 0.5, "crowd log error {crowd_err}");

    // (b) the trend of the omega sweep lands near the truth
    let grid = OmegaGrid::default_grid();
    let points = sweep(&subjects, &grid, Aggregator::GeometricMean, 5).unwrap();
    let ce = confident_estimate(
        &points,
        5,
        ExtractionMethod::TrendIntercept,
        Aggregator::GeometricMean,
    )
    .unwrap();
    let trend_err = log_error(ce.value, 734.0).unwrap();
    assert!(trend_err <= 0.1, "trend log error {trend_err}");

    // (c) the sweep climbs toward the truth in at least 80% of steps
    let estimates: Vec<f64> = points
        .iter()
        .filter(|p| p.n_selected >= 5)
        .filter_map(|p| p.estimate)
        .collect();
    let up = estimates.windows(2).filter(|w| w[1] >= w[0]).count();
    let steps = estimates.windows(2).count();
    let mono = up as f64 / steps as f64;
    assert!(mono >= 0.8, "monotone fraction {mono} ({up}/{steps})");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "acceptance 07 (bias elimination): PASS (crowd {crowd:.0} err {crowd_err:.3}, \
         trend {:.0} err {trend_err:.3}, mono {mono:.3}, {:.0} ms)",
        ce.value,
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_08_weight_distribution_structure() {
    let mut rng = group_rng(4711, 0);
    let ws: Vec<SocialWeight> = draw_weights(&WeightMixture::default(), 10_000, &mut rng)
        .into_iter()
        .map(SocialWeight::Valid)
        .collect();
    let wh = weight_histogram(&ws, 0.1).unwrap();
    let bins = &wh.histogram.bins;
    let idx_of = |left: f64| {
        bins.iter()
            .position(|b| (b.left_edge - left).abs() < 1e-9)
            .unwrap_or_else(|| panic!("no bin at {left}"))
    };
    for spike_left in [0.0, 1.0] {
        let i = idx_of(spike_left);
        assert!(i > 0 && i + 1 < bins.len(), "spike bin at the histogram edge");
        let f = bins[i].frequency;
        assert!(
            f > bins[i - 1].frequency && f > bins[i + 1].frequency,
            "bin at {spike_left} ({f}) does not exceed neighbours ({}, {})",
            bins[i - 1].frequency,
            bins[i + 1].frequency
        );
    }
    println!("acceptance 08 (weight spikes at 0 and 1): PASS");
}

#[test]
fn criterion_09_filter_boundary_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let subjects: Vec<(Estimate, SocialWeight)> = (0..200)
        .map(|i| {
            let x1 = est(rng.gen_range(1.0..2000.0));
            let w = if i % 17 == 0 {
                SocialWeight::UndefinedSignal
            } else {
                SocialWeight::Valid(rng.gen_range(-1.4..1.4))
            };
            (x1, w)
        })
        .collect();
    let max_abs = subjects
        .iter()
        .filter_map(|(_, w)| w.value())
        .fold(0.0f64, |m, w| m.max(w.abs()));
    let grid = OmegaGrid::new(vec![max_abs]).unwrap();
    let pts = sweep(&subjects, &grid, Aggregator::GeometricMean, 1).unwrap();
    let valid: Vec<Estimate> = subjects
        .iter()
        .filter(|(_, w)| w.is_valid())
        .map(|&(x, _)| x)
        .collect();
    let crowd = aggregate(&valid, Aggregator::GeometricMean).unwrap();
    assert_eq!(pts[0].n_selected, valid.len());
    assert_eq!(
        pts[0].estimate.unwrap().to_bits(),
        crowd.to_bits(),
        "boundary sweep estimate differs from the crowd aggregate"
    );
    println!("acceptance 09 (boundary identity, bit-for-bit): PASS");
}
