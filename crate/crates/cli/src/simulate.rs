//! The `simulate` command: write a synthetic two-trial experiment as the
//! standard file triple (data, questions, ground-truth weights).

use std::path::{Path, PathBuf};

use anyhow::Context;
use confident_crowd::sim::{simulate_experiment, SimConfig, SyntheticDataset};

use crate::dataset::condition_token;
use crate::report::write_atomic;

pub struct SimulateOptions {
    pub config: SimConfig,
    pub question_id: String,
    pub question_text: String,
    pub out_dir: PathBuf,
}

fn group_token(index: u32) -> String {
    format!("g{index:04}")
}

fn subject_token(index: u32) -> String {
    format!("s{index:02}")
}

pub fn run_simulate(opts: &SimulateOptions) -> anyhow::Result<SimPaths> {
    std::fs::create_dir_all(&opts.out_dir)
        .with_context(|| format!("cannot create {}", opts.out_dir.display()))?;
    let dataset = simulate_experiment(&opts.config)
        .map_err(|e| anyhow::anyhow!("invalid simulation config: {e}"))?;

    let paths = SimPaths {
        data: opts.out_dir.join("data.csv"),
        questions: opts.out_dir.join("questions.csv"),
        weights: opts.out_dir.join("weights_true.csv"),
    };
    write_data_csv(&paths.data, &dataset, &opts.question_id, &opts.config)?;
    write_questions_csv(&paths.questions, &opts.question_id, &opts.question_text, opts.config.truth)?;
    write_weights_csv(&paths.weights, &dataset)?;

    // echo the resolved config so any run is reproducible after the fact
    println!(
        "simulated {} groups x {} subjects (condition {}, truth {}, sigma_p {}, bias_slope {}, \
         mixture p_zero {} p_one {} p_out {} shape {}, seed {})",
        opts.config.n_groups,
        opts.config.group_size,
        condition_token(opts.config.condition),
        opts.config.truth,
        opts.config.sigma_p,
        opts.config.bias_slope,
        opts.config.mixture.p_zero,
        opts.config.mixture.p_one,
        opts.config.mixture.p_out,
        opts.config.mixture.interior_shape,
        opts.config.seed,
    );
    println!(
        "wrote {}, {}, {}",
        paths.data.display(),
        paths.questions.display(),
        paths.weights.display()
    );
    Ok(paths)
}

pub struct SimPaths {
    pub data: PathBuf,
    pub questions: PathBuf,
    pub weights: PathBuf,
}

fn write_data_csv(
    path: &Path,
    dataset: &SyntheticDataset,
    question_id: &str,
    config: &SimConfig,
) -> anyhow::Result<()> {
    let mut out = String::from("group_id,subject_id,question_id,condition,trial,estimate\n");
    let token = condition_token(config.condition);
    for s in &dataset.subjects {
        let (g, subj) = (group_token(s.group), subject_token(s.subject));
        // shortest round-trip formatting keeps the files lossless
        out.push_str(&format!("{g},{subj},{question_id},{token},1,{}\n", s.x1));
        out.push_str(&format!("{g},{subj},{question_id},{token},2,{}\n", s.x2));
    }
    write_atomic(path, out.as_bytes())
}

fn write_questions_csv(
    path: &Path,
    question_id: &str,
    text: &str,
    truth: f64,
) -> anyhow::Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["question_id", "text", "truth"])?;
    writer.write_record([question_id, text, &truth.to_string()])?;
    let bytes = writer.into_inner().context("csv buffer")?;
    write_atomic(path, &bytes)
}

fn write_weights_csv(path: &Path, dataset: &SyntheticDataset) -> anyhow::Result<()> {
    let mut out = String::from("group_id,subject_id,w_true\n");
    for s in &dataset.subjects {
        out.push_str(&format!(
            "{},{},{}\n",
            group_token(s.group),
            subject_token(s.subject),
            s.w_true
        ));
    }
    write_atomic(path, out.as_bytes())
}
