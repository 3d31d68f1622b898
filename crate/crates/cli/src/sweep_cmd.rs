//! The `sweep` command: the omega sweep curve for one question as CSV.

use std::path::PathBuf;

use anyhow::{bail, Context};
use confident_crowd::filter::{sweep, OmegaGrid};
use confident_crowd::model::Aggregator;

use crate::analyze::write_sweep_csv;
use crate::dataset::Dataset;
use crate::pipeline::{collect_questions, pooled_subjects};
use crate::report::sanitize_stem;

pub struct SweepOptions {
    pub question: Option<String>,
    pub omega_max: f64,
    pub omega_min: f64,
    pub omega_steps: usize,
    pub min_n: usize,
    pub out_dir: PathBuf,
}

pub fn run_sweep(dataset: &Dataset, opts: &SweepOptions) -> anyhow::Result<PathBuf> {
    let questions = collect_questions(dataset);
    let qid = match &opts.question {
        Some(q) => {
            if !questions.contains_key(q) {
                bail!(
                    "unknown question_id `{q}`; available: {}",
                    questions.keys().cloned().collect::<Vec<_>>().join(", ")
                );
            }
            q.clone()
        }
        None if questions.len() == 1 => questions.keys().next().expect("one question").clone(),
        None => bail!(
            "dataset has {} questions; pick one with --question (available: {})",
            questions.len(),
            questions.keys().cloned().collect::<Vec<_>>().join(", ")
        ),
    };

    let grid = OmegaGrid::logspaced(opts.omega_max, opts.omega_min, opts.omega_steps)
        .map_err(|e| anyhow::anyhow!("invalid omega grid: {e}"))?;
    let pooled = pooled_subjects(&questions[&qid]);
    if pooled.is_empty() {
        bail!("question `{qid}` has no weight-computable subjects (control-only or missing trials)");
    }
    let geo =
        sweep(&pooled, &grid, Aggregator::GeometricMean, opts.min_n).expect("non-empty subjects");
    let med = sweep(&pooled, &grid, Aggregator::Median, opts.min_n).expect("non-empty subjects");

    std::fs::create_dir_all(&opts.out_dir)
        .with_context(|| format!("cannot create {}", opts.out_dir.display()))?;
    let path = opts.out_dir.join(format!("sweep_{}.csv", sanitize_stem(&qid)));
    write_sweep_csv(&path, &geo, &med)?;
    println!("sweep for question {qid} written to {}", path.display());
    Ok(path)
}
