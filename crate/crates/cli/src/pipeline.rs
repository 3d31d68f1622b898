//! Shared analysis plumbing: structure rows by question and group, derive
//! signals and per-subject weights, pool subjects for sweeping.

use std::collections::BTreeMap;

use confident_crowd::model::Estimate;
use confident_crowd::weights::{
    social_signal, social_weight, Condition, SocialWeight, SubjectResponse,
};

use crate::dataset::Dataset;

/// A subject's estimates for one question (keyed inside a group).
#[derive(Debug, Clone, Default)]
pub struct SubjectTrials {
    pub x1: Option<f64>,
    pub x2: Option<f64>,
}

/// One group's responses to one question.
#[derive(Debug, Clone)]
pub struct GroupData {
    pub condition: Condition,
    /// subject_id -> trials, ordered for determinism
    pub subjects: BTreeMap<String, SubjectTrials>,
}

/// Everything recorded for one question, ordered by group id.
#[derive(Debug, Clone, Default)]
pub struct QuestionData {
    pub groups: BTreeMap<String, GroupData>,
}


/// Group rows by question, group, and subject. Trials other than 1 and 2
/// are accepted in the schema but ignored by the analysis.
pub fn collect_questions(dataset: &Dataset) -> BTreeMap<String, QuestionData> {
    let mut out: BTreeMap<String, QuestionData> = BTreeMap::new();
    for row in &dataset.rows {
        let question = out.entry(row.question_id.clone()).or_default();
        let group = question
            .groups
            .entry(row.group_id.clone())
            .or_insert_with(|| GroupData { condition: row.condition, subjects: BTreeMap::new() });
        let subject = group.subjects.entry(row.subject_id.clone()).or_default();
        match row.trial {
            1 => subject.x1 = Some(row.estimate),
            2 => subject.x2 = Some(row.estimate),
            _ => {}
        }
    }
    out
}

/// All first-trial estimates of a question, pooled across groups in
/// (group_id, subject_id) order.
pub fn trial_estimates(question: &QuestionData, trial: u32) -> Vec<Estimate> {
    question
        .groups
        .values()
        .flat_map(|g| g.subjects.values())
        .filter_map(|s| if trial == 1 { s.x1 } else { s.x2 })
        .map(|v| Estimate::new(v).expect("validated on load"))
        .collect()
}

/// A group's first-trial estimates (the basis of its social signal).
pub fn group_trial1(group: &GroupData) -> Vec<Estimate> {
    group
        .subjects
        .values()
        .filter_map(|s| s.x1)
        .map(|v| Estimate::new(v).expect("validated on load"))
        .collect()
}

/// Recover weights for every subject of every non-control group with both
/// trials present, pooled across the question's groups in
/// (group_id, subject_id) order.
pub fn pooled_subjects(question: &QuestionData) -> Vec<(Estimate, SocialWeight)> {
    let mut pooled = Vec::new();
    for group in question.groups.values() {
        if group.condition == Condition::Control {
            continue;
        }
        let first = group_trial1(group);
        let Ok(signal) = social_signal(group.condition, &first) else {
            continue; // group without any first-trial estimates
        };
        for trials in group.subjects.values() {
            let (Some(x1), Some(x2)) = (trials.x1, trials.x2) else {
                continue;
            };
            let x1 = Estimate::new(x1).expect("validated on load");
            let resp = SubjectResponse {
                x1,
                x2: Estimate::new(x2).expect("validated on load"),
                signal,
            };
            pooled.push((x1, social_weight(&resp)));
        }
    }
    pooled
}
