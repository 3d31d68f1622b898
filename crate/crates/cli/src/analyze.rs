//! The `analyze` command: per-question aggregates, distribution figures,
//! weights, the omega sweep, and confident estimates, emitted as a
//! deterministic JSON report plus plot-data CSVs.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{json, Map, Value};

use confident_crowd::filter::{
    confident_estimate, log_error, sweep, ConfidentEstimate, ExtractionMethod, OmegaGrid,
    SweepPoint,
};
use confident_crowd::model::{
    aggregate, build_histogram, coverage_band, fit_gaussian_frequencies, fit_lognormal_mle,
    standardize_logs, Aggregator, Estimate, Histogram,
};
use confident_crowd::weights::{social_signal, weight_histogram, Condition, SocialWeight};
use confident_crowd::Error;

use crate::dataset::{condition_token, Dataset};
use crate::fmt::g9;
use crate::pipeline::{collect_questions, group_trial1, pooled_subjects, trial_estimates, QuestionData};
use crate::report::{num, opt_num, sanitize_stem, write_atomic, write_csv};

pub const Z_BIN_WIDTH: f64 = 0.2;
pub const WEIGHT_BIN_WIDTH: f64 = 0.1;
pub const BAND_COVERAGE: f64 = 0.9;
const FIT_CURVE_POINTS: usize = 201;

pub struct AnalyzeOptions {
    pub omega_max: f64,
    pub omega_min: f64,
    pub omega_steps: usize,
    pub min_n: usize,
    pub aggregator: Aggregator,
    pub method: ExtractionMethod,
    pub per_group: bool,
    pub out_dir: PathBuf,
}

pub fn aggregator_name(a: Aggregator) -> &'static str {
    match a {
        Aggregator::ArithmeticMean => "arithmetic_mean",
        Aggregator::Median => "median",
        Aggregator::GeometricMean => "geometric_mean",
    }
}

pub fn method_name(m: ExtractionMethod) -> &'static str {
    match m {
        ExtractionMethod::SmallestFeasibleOmega => "smallest_feasible_omega",
        ExtractionMethod::TrendIntercept => "trend_intercept",
    }
}

pub fn run_analyze(dataset: &Dataset, opts: &AnalyzeOptions) -> anyhow::Result<()> {
    std::fs::create_dir_all(&opts.out_dir)
        .with_context(|| format!("cannot create {}", opts.out_dir.display()))?;
    let grid = OmegaGrid::logspaced(opts.omega_max, opts.omega_min, opts.omega_steps)
        .map_err(|e| anyhow::anyhow!("invalid omega grid: {e}"))?;

    let questions = collect_questions(dataset);
    let mut question_reports = Map::new();
    for (qid, qdata) in &questions {
        let block = analyze_question(dataset, qid, qdata, &grid, opts)?;
        question_reports.insert(qid.clone(), block);
    }

    let report = json!({
        "schema": "confident-crowd/report/v1",
        "settings": {
            "omega_max": num(opts.omega_max),
            "omega_min": num(opts.omega_min),
            "omega_steps": opts.omega_steps,
            "min_n": opts.min_n,
            "aggregator": aggregator_name(opts.aggregator),
            "method": method_name(opts.method),
            "z_bin_width": num(Z_BIN_WIDTH),
            "weight_bin_width": num(WEIGHT_BIN_WIDTH),
            "band_coverage": num(BAND_COVERAGE),
            "skipped_rows": dataset.skipped,
        },
        "questions": Value::Object(question_reports),
    });

    let path = opts.out_dir.join("report.json");
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    write_atomic(&path, &bytes)?;
    println!("report written to {}", path.display());
    Ok(())
}

fn analyze_question(
    dataset: &Dataset,
    qid: &str,
    qdata: &QuestionData,
    grid: &OmegaGrid,
    opts: &AnalyzeOptions,
) -> anyhow::Result<Value> {
    let qrow = &dataset.questions[qid];
    let stem = sanitize_stem(qid);
    let mut warnings: Vec<String> = Vec::new();
    let mut figures = Map::new();

    let trial1 = trial_estimates(qdata, 1);
    let trial2 = trial_estimates(qdata, 2);

    let mut block = Map::new();
    block.insert("text".into(), json!(qrow.text));
    block.insert("truth".into(), opt_num(qrow.truth));
    block.insert("n_groups".into(), json!(qdata.groups.len()));
    block.insert("n_trial1".into(), json!(trial1.len()));
    block.insert("n_trial2".into(), json!(trial2.len()));

    if trial1.is_empty() {
        block.insert("note".into(), json!("no first-trial estimates; nothing to analyze"));
        return Ok(Value::Object(block));
    }

    // crowd aggregates of the first trial
    let mut aggregates = Map::new();
    for method in [Aggregator::ArithmeticMean, Aggregator::Median, Aggregator::GeometricMean] {
        let value = aggregate(&trial1, method).expect("non-empty trial1");
        aggregates.insert(aggregator_name(method).into(), num(value));
    }
    block.insert("aggregates_trial1".into(), Value::Object(aggregates.clone()));

    // log-normal fits per trial
    for (name, values) in [("lognormal_fit_trial1", &trial1), ("lognormal_fit_trial2", &trial2)] {
        match fit_lognormal_mle(values) {
            Ok(fit) => {
                block.insert(
                    name.into(),
                    json!({"mu": num(fit.mu), "sigma": num(fit.sigma), "median": num(fit.median())}),
                );
            }
            Err(e) => {
                block.insert(name.into(), Value::Null);
                warnings.push(format!("{name}: {e}"));
            }
        }
    }

    // standardized histograms, Gaussian fits, coverage bands
    for (trial, values) in [(1u32, &trial1), (2u32, &trial2)] {
        match figure_files(&stem, trial, values, &opts.out_dir) {
            Ok(Some(entry)) => {
                figures.insert(format!("trial{trial}"), entry);
            }
            Ok(None) => {}
            Err(e) => warnings.push(format!("trial{trial} figure: {e}")),
        }
    }

    // weights and the sweep (non-control groups only)
    let pooled = pooled_subjects(qdata);
    let all_control = qdata.groups.values().all(|g| g.condition == Condition::Control);
    if pooled.is_empty() {
        let note = if all_control {
            "control-only dataset: no social signals, so no weights or sweep"
        } else {
            "no subjects with both trials in non-control groups"
        };
        block.insert("note".into(), json!(note));
        block.insert("weights".into(), Value::Null);
        block.insert("sweep".into(), Value::Null);
        block.insert("confident_estimates".into(), Value::Null);
    } else {
        let weights: Vec<SocialWeight> = pooled.iter().map(|&(_, w)| w).collect();
        let n_valid = weights.iter().filter(|w| w.is_valid()).count();
        let n_undefined = weights.len() - n_valid;

        let mut weight_block = Map::new();
        weight_block.insert("n_valid".into(), json!(n_valid));
        weight_block.insert("n_undefined".into(), json!(n_undefined));
        match weight_histogram(&weights, WEIGHT_BIN_WIDTH) {
            Ok(wh) => {
                weight_block.insert("histogram".into(), histogram_value(&wh.histogram));
                let path = opts.out_dir.join(format!("{stem}_weights_hist.csv"));
                write_histogram_csv(&path, &wh.histogram)?;
                figures.insert("weights".into(), json!(path.file_name().unwrap().to_str()));
            }
            Err(e) => {
                weight_block.insert("histogram".into(), Value::Null);
                warnings.push(format!("weight histogram: {e}"));
            }
        }
        block.insert("weights".into(), Value::Object(weight_block));

        // sweep with both aggregators over the shared grid
        let sweep_geo =
            sweep(&pooled, grid, Aggregator::GeometricMean, opts.min_n).expect("non-empty subjects");
        let sweep_med =
            sweep(&pooled, grid, Aggregator::Median, opts.min_n).expect("non-empty subjects");

        let sweep_rows: Vec<Value> = sweep_geo
            .iter()
            .zip(&sweep_med)
            .map(|(g, m)| {
                json!({
                    "omega": num(g.omega),
                    "n_selected": g.n_selected,
                    "estimate_geomean": opt_num(g.estimate),
                    "estimate_median": opt_num(m.estimate),
                })
            })
            .collect();
        block.insert("sweep".into(), Value::Array(sweep_rows));
        let sweep_path = opts.out_dir.join(format!("{stem}_sweep.csv"));
        write_sweep_csv(&sweep_path, &sweep_geo, &sweep_med)?;
        figures.insert("sweep".into(), json!(sweep_path.file_name().unwrap().to_str()));

        // confident estimates: both methods, both subgroup aggregators
        let mut confident = Map::new();
        let mut confident_raw: Vec<(String, f64)> = Vec::new();
        for (points, agg) in [(&sweep_geo, Aggregator::GeometricMean), (&sweep_med, Aggregator::Median)] {
            for method in
                [ExtractionMethod::SmallestFeasibleOmega, ExtractionMethod::TrendIntercept]
            {
                let key = format!("{}_{}", method_name(method), aggregator_name(agg));
                match confident_estimate(points, opts.min_n, method, agg) {
                    Ok(ce) => {
                        confident.insert(key.clone(), confident_value(&ce));
                        confident_raw.push((key, ce.value));
                    }
                    Err(Error::NoFeasibleOmega) => {
                        confident.insert(key.clone(), Value::Null);
                        warnings.push(format!("{key}: NoFeasibleOmega (fewer than min_n subjects at every omega)"));
                    }
                    Err(e) => return Err(anyhow::anyhow!("confident estimate {key}: {e}")),
                }
            }
        }
        block.insert("confident_estimates".into(), Value::Object(confident.clone()));
        let selected_key =
            format!("{}_{}", method_name(opts.method), aggregator_name(opts.aggregator));
        block.insert(
            "selected_confident_estimate".into(),
            json!({
                "key": selected_key,
                "value": confident.get(&selected_key).cloned().unwrap_or(Value::Null),
            }),
        );

        // errors against the truth, when known
        if let Some(truth) = qrow.truth {
            let mut errors = Map::new();
            for method in
                [Aggregator::ArithmeticMean, Aggregator::Median, Aggregator::GeometricMean]
            {
                let value = aggregate(&trial1, method).expect("non-empty trial1");
                errors.insert(
                    format!("crowd_{}", aggregator_name(method)),
                    num(log_error(value, truth).expect("positive values")),
                );
            }
            for (key, v) in &confident_raw {
                errors.insert(
                    format!("confident_{key}"),
                    num(log_error(*v, truth).expect("positive values")),
                );
            }
            block.insert("log_errors".into(), Value::Object(errors));
        }
    }

    if opts.per_group {
        block.insert("per_group".into(), per_group_value(qdata));
    }
    block.insert("figures".into(), Value::Object(figures));
    if !warnings.is_empty() {
        for w in &warnings {
            eprintln!("warning: question {qid}: {w}");
        }
        block.insert("warnings".into(), json!(warnings));
    }
    Ok(Value::Object(block))
}

fn confident_value(ce: &ConfidentEstimate) -> Value {
    json!({
        "value": num(ce.value),
        "omega_used": num(ce.omega_used),
        "n_used": ce.n_used,
    })
}

fn histogram_value(hist: &Histogram) -> Value {
    json!({
        "bin_width": num(hist.bin_width),
        "n": hist.n,
        "bins": hist
            .bins
            .iter()
            .map(|b| json!({"left_edge": num(b.left_edge), "frequency": num(b.frequency)}))
            .collect::<Vec<_>>(),
    })
}

fn per_group_value(qdata: &QuestionData) -> Value {
    let mut groups = Map::new();
    for (gid, group) in &qdata.groups {
        let first = group_trial1(group);
        let mu_s = social_signal(group.condition, &first).ok().map(|s| s.mu_s);
        let n_trial2 = group.subjects.values().filter(|s| s.x2.is_some()).count();
        groups.insert(
            gid.clone(),
            json!({
                "condition": condition_token(group.condition),
                "n_subjects": group.subjects.len(),
                "n_trial1": first.len(),
                "n_trial2": n_trial2,
                "mu_s": opt_num(mu_s),
            }),
        );
    }
    Value::Object(groups)
}

/// Standardize, histogram, fit and band one trial's estimates; write the
/// three plot files. Returns the report entry, or None when the trial has
/// no estimates at all.
fn figure_files(
    stem: &str,
    trial: u32,
    values: &[Estimate],
    out_dir: &Path,
) -> Result<Option<Value>, Error> {
    if values.is_empty() {
        return Ok(None);
    }
    let standardized = standardize_logs(values)?;
    let hist = build_histogram(&standardized.zscores, Z_BIN_WIDTH)?;
    let fit = fit_gaussian_frequencies(&hist)?;
    let band = coverage_band(&fit, &hist.edges(), hist.n, BAND_COVERAGE)?;

    let hist_path = out_dir.join(format!("{stem}_trial{trial}_hist.csv"));
    write_histogram_csv(&hist_path, &hist).map_err(io_to_error)?;

    let edges = hist.edges();
    let (lo, hi) = (edges[0], *edges.last().expect("non-empty"));
    let fit_rows: Vec<String> = (0..FIT_CURVE_POINTS)
        .map(|i| {
            let z = lo + (hi - lo) * i as f64 / (FIT_CURVE_POINTS - 1) as f64;
            format!("{},{}", g9(z), g9(fit.curve(z, Z_BIN_WIDTH)))
        })
        .collect();
    let fit_path = out_dir.join(format!("{stem}_trial{trial}_fit.csv"));
    write_csv(&fit_path, "z,frequency", &fit_rows).map_err(io_to_error)?;

    let band_rows: Vec<String> = band
        .bins
        .iter()
        .map(|b| {
            format!(
                "{},{},{},{}",
                g9(b.left_edge),
                g9(b.left_edge + 0.5 * Z_BIN_WIDTH),
                g9(b.low),
                g9(b.high)
            )
        })
        .collect();
    let band_path = out_dir.join(format!("{stem}_trial{trial}_band.csv"));
    write_csv(&band_path, "left_edge,center,low,high", &band_rows).map_err(io_to_error)?;

    Ok(Some(json!({
        "histogram": hist_path.file_name().unwrap().to_str(),
        "fit_curve": fit_path.file_name().unwrap().to_str(),
        "band": band_path.file_name().unwrap().to_str(),
        "gaussian_fit": {"mu": num(fit.mu), "sigma": num(fit.sigma), "residual": num(fit.residual)},
    })))
}

fn io_to_error(e: anyhow::Error) -> Error {
    Error::InvalidParameter(format!("i/o failure: {e}"))
}

fn write_histogram_csv(path: &Path, hist: &Histogram) -> anyhow::Result<()> {
    let rows: Vec<String> = hist
        .bins
        .iter()
        .map(|b| {
            format!(
                "{},{},{}",
                g9(b.left_edge),
                g9(b.left_edge + 0.5 * hist.bin_width),
                g9(b.frequency)
            )
        })
        .collect();
    write_csv(path, "left_edge,center,frequency", &rows)
}

pub fn write_sweep_csv(
    path: &Path,
    geo: &[SweepPoint],
    med: &[SweepPoint],
) -> anyhow::Result<()> {
    let rows: Vec<String> = geo
        .iter()
        .zip(med)
        .map(|(g, m)| {
            format!(
                "{},{},{},{}",
                g9(g.omega),
                g.n_selected,
                g.estimate.map(g9).unwrap_or_default(),
                m.estimate.map(g9).unwrap_or_default(),
            )
        })
        .collect();
    write_csv(path, "omega,n_selected,estimate_geomean,estimate_median", &rows)
}
