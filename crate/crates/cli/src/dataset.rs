//! Dataset ingestion and validation.
//!
//! Two CSV files describe an experiment: per-trial estimate rows and a
//! question table with optional ground truths. Loading is strict by
//! default — the first violation aborts with its file, line and rule —
//! and `--skip-invalid` downgrades row-level violations to warnings.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use confident_crowd::weights::Condition;

pub const DATA_HEADER: [&str; 6] =
    ["group_id", "subject_id", "question_id", "condition", "trial", "estimate"];
pub const QUESTIONS_HEADER: [&str; 3] = ["question_id", "text", "truth"];

/// One estimate row of the data file.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub group_id: String,
    pub subject_id: String,
    pub question_id: String,
    pub condition: Condition,
    pub trial: u32,
    pub estimate: f64,
}

/// One row of the questions file; `truth` may be left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct QuestionRow {
    pub question_id: String,
    pub text: String,
    pub truth: Option<f64>,
}

/// A validated dataset.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub rows: Vec<DatasetRow>,
    pub questions: BTreeMap<String, QuestionRow>,
    /// Row-level violations skipped under `--skip-invalid`.
    pub skipped: usize,
}

pub fn condition_token(c: Condition) -> &'static str {
    match c {
        Condition::Control => "control",
        Condition::AggregatedMean => "mean",
        Condition::FullInformation => "full",
    }
}

fn parse_condition(token: &str) -> Option<Condition> {
    match token {
        "control" => Some(Condition::Control),
        "mean" => Some(Condition::AggregatedMean),
        "full" => Some(Condition::FullInformation),
        _ => None,
    }
}

/// A single validation failure, locatable in its source file.
struct Violation {
    file: String,
    line: u64,
    rule: &'static str,
    detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: [{}] {}", self.file, self.line, self.rule, self.detail)
    }
}

struct RowGate {
    skip_invalid: bool,
    skipped: usize,
}

impl RowGate {
    /// Report a row-level violation: abort in strict mode, warn otherwise.
    fn row_violation(&mut self, v: Violation) -> anyhow::Result<()> {
        if self.skip_invalid {
            eprintln!("warning: skipping {v}");
            self.skipped += 1;
            Ok(())
        } else {
            bail!("{v}");
        }
    }
}

fn check_header(
    reader: &mut csv::Reader<std::fs::File>,
    expected: &[&str],
    file: &str,
) -> anyhow::Result<()> {
    let headers = reader.headers().with_context(|| format!("{file}: cannot read header"))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        bail!(
            "{file}:1: [BadHeader] expected header `{}`, got `{}`",
            expected.join(","),
            got.join(",")
        );
    }
    Ok(())
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Load and validate the data/questions file pair.
pub fn load_dataset(
    data_path: &Path,
    questions_path: &Path,
    skip_invalid: bool,
) -> anyhow::Result<Dataset> {
    let mut gate = RowGate { skip_invalid, skipped: 0 };

    // questions first so data rows can be checked against them
    let qfile = questions_path.display().to_string();
    let mut qreader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(questions_path)
        .with_context(|| format!("cannot open questions file {qfile}"))?;
    check_header(&mut qreader, &QUESTIONS_HEADER, &qfile)?;

    let mut questions: BTreeMap<String, QuestionRow> = BTreeMap::new();
    for record in qreader.records() {
        let record = record.with_context(|| format!("{qfile}: malformed CSV"))?;
        let line = record_line(&record);
        if record.len() != QUESTIONS_HEADER.len() {
            gate.row_violation(Violation {
                file: qfile.clone(),
                line,
                rule: "FieldCount",
                detail: format!("expected {} fields, got {}", QUESTIONS_HEADER.len(), record.len()),
            })?;
            continue;
        }
        let question_id = record[0].to_string();
        let truth_field = record[2].trim();
        let truth = if truth_field.is_empty() {
            None
        } else {
            match truth_field.parse::<f64>() {
                Ok(t) if t.is_finite() && t > 0.0 => Some(t),
                _ => {
                    gate.row_violation(Violation {
                        file: qfile.clone(),
                        line,
                        rule: "NonPositiveTruth",
                        detail: format!("truth must be a positive decimal, got `{truth_field}`"),
                    })?;
                    continue;
                }
            }
        };
        match questions.entry(question_id.clone()) {
            Entry::Occupied(_) => {
                gate.row_violation(Violation {
                    file: qfile.clone(),
                    line,
                    rule: "DuplicateKey",
                    detail: format!("question_id `{question_id}` already defined"),
                })?;
            }
            Entry::Vacant(slot) => {
                slot.insert(QuestionRow { question_id, text: record[1].to_string(), truth });
            }
        }
    }

    let dfile = data_path.display().to_string();
    let mut dreader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(data_path)
        .with_context(|| format!("cannot open data file {dfile}"))?;
    check_header(&mut dreader, &DATA_HEADER, &dfile)?;

    let mut rows = Vec::new();
    let mut seen_keys: BTreeSet<(String, String, String, u32)> = BTreeSet::new();
    let mut group_conditions: BTreeMap<(String, String), Condition> = BTreeMap::new();
    for record in dreader.records() {
        let record = record.with_context(|| format!("{dfile}: malformed CSV"))?;
        let line = record_line(&record);
        if record.len() != DATA_HEADER.len() {
            gate.row_violation(Violation {
                file: dfile.clone(),
                line,
                rule: "FieldCount",
                detail: format!("expected {} fields, got {}", DATA_HEADER.len(), record.len()),
            })?;
            continue;
        }
        let (group_id, subject_id, question_id) =
            (record[0].to_string(), record[1].to_string(), record[2].to_string());

        let Some(condition) = parse_condition(&record[3]) else {
            gate.row_violation(Violation {
                file: dfile.clone(),
                line,
                rule: "UnknownCondition",
                detail: format!("condition must be control|mean|full, got `{}`", &record[3]),
            })?;
            continue;
        };
        let trial = match record[4].parse::<u32>() {
            Ok(t) if t >= 1 => t,
            _ => {
                gate.row_violation(Violation {
                    file: dfile.clone(),
                    line,
                    rule: "BadTrial",
                    detail: format!("trial must be an integer >= 1, got `{}`", &record[4]),
                })?;
                continue;
            }
        };
        let estimate = match record[5].parse::<f64>() {
            Ok(e) if e.is_finite() && e > 0.0 => e,
            _ => {
                gate.row_violation(Violation {
                    file: dfile.clone(),
                    line,
                    rule: "NonPositiveEstimate",
                    detail: format!("estimate must be a positive decimal, got `{}`", &record[5]),
                })?;
                continue;
            }
        };
        if !questions.contains_key(&question_id) {
            gate.row_violation(Violation {
                file: dfile.clone(),
                line,
                rule: "UnknownQuestion",
                detail: format!("question_id `{question_id}` not in questions file"),
            })?;
            continue;
        }
        let key = (group_id.clone(), subject_id.clone(), question_id.clone(), trial);
        if !seen_keys.insert(key) {
            gate.row_violation(Violation {
                file: dfile.clone(),
                line,
                rule: "DuplicateKey",
                detail: format!(
                    "({group_id}, {subject_id}, {question_id}, trial {trial}) already present"
                ),
            })?;
            continue;
        }
        match group_conditions.entry((group_id.clone(), question_id.clone())) {
            Entry::Occupied(prev) if *prev.get() != condition => {
                gate.row_violation(Violation {
                    file: dfile.clone(),
                    line,
                    rule: "InconsistentCondition",
                    detail: format!(
                        "group `{group_id}` question `{question_id}` already declared {}",
                        condition_token(*prev.get())
                    ),
                })?;
                continue;
            }
            Entry::Occupied(_) => {}
            Entry::Vacant(slot) => {
                slot.insert(condition);
            }
        }
        rows.push(DatasetRow { group_id, subject_id, question_id, condition, trial, estimate });
    }

    if gate.skipped > 0 {
        eprintln!("warning: skipped {} invalid row(s)", gate.skipped);
    }
    Ok(Dataset { rows, questions, skipped: gate.skipped })
}
