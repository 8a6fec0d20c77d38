//! Evaluation metrics over candidate samples: pass@1, pass@k, and the
//! self-consistency metric sc@k (majority vote over reported objectives,
//! ties counted incorrect).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::problem::WorldDescriptor;
use crate::reward::{score_candidate, Candidate, RewardBreakdown, RewardConfig};
use crate::{round2, Error, Result};

/// Candidate samples for one problem, as stored in candidates JSONL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub problem_id: String,
    pub samples: Vec<Candidate>,
}

/// Per-sample outcome retained in the evaluation record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub breakdown: RewardBreakdown,
    pub reported_objective: Option<f64>,
}

/// Per-problem evaluation record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub problem_id: String,
    pub category: String,
    pub samples: Vec<SampleOutcome>,
    pub pass_at_1: bool,
    pub pass_at_k: bool,
    pub sc_at_k: bool,
}

/// Aggregate rollup for one slice of the dataset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryMetrics {
    pub problems: usize,
    pub pass_at_1: f64,
    pub pass_at_k: f64,
    pub sc_at_k: f64,
}

/// Full metrics report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub k: usize,
    pub overall: CategoryMetrics,
    pub per_category: BTreeMap<String, CategoryMetrics>,
}

/// Output verbosity of the eval command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Summary,
    Detailed,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "summary" => Ok(EvalMode::Summary),
            "detailed" => Ok(EvalMode::Detailed),
            other => Err(Error::Config(format!("unknown eval mode `{other}`"))),
        }
    }
}

/// Score every problem's first `k` samples and aggregate the metrics.
/// Every problem in the dataset must have at least `k` samples.
pub fn evaluate(
    dataset: &[WorldDescriptor],
    candidates: &[CandidateSet],
    k: usize,
    cfg: &RewardConfig,
) -> Result<(Vec<EvalRecord>, MetricsReport)> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let by_id: BTreeMap<&str, &CandidateSet> = candidates
        .iter()
        .map(|c| (c.problem_id.as_str(), c))
        .collect();
    let short: Vec<String> = dataset
        .iter()
        .filter(|w| by_id.get(w.id.as_str()).is_none_or(|c| c.samples.len() < k))
        .map(|w| w.id.clone())
        .collect();
    if !short.is_empty() {
        return Err(Error::SampleShortfall { k, ids: short });
    }

    let mut records = Vec::new();
    for w in dataset {
        let set = by_id[w.id.as_str()];
        let samples: Vec<SampleOutcome> = set.samples[..k]
            .iter()
            .map(|cand| {
                let scored = score_candidate(cand, w, cfg);
                SampleOutcome {
                    breakdown: scored.breakdown,
                    reported_objective: scored.reported_objective,
                }
            })
            .collect();
        let pass_at_1 = samples.first().is_some_and(|s| s.breakdown.r_opt > 0.0);
        let pass_at_k = samples.iter().any(|s| s.breakdown.r_opt > 0.0);
        let sc_at_k = majority_matches(&samples, w);
        records.push(EvalRecord {
            problem_id: w.id.clone(),
            category: w.formulation.category.to_string(),
            samples,
            pass_at_1,
            pass_at_k,
            sc_at_k,
        });
    }

    let mut per_category: BTreeMap<String, Vec<&EvalRecord>> = BTreeMap::new();
    for r in &records {
        per_category.entry(r.category.clone()).or_default().push(r);
    }
    let rollup = |rs: &[&EvalRecord]| -> CategoryMetrics {
        let n = rs.len().max(1) as f64;
        CategoryMetrics {
            problems: rs.len(),
            pass_at_1: rs.iter().filter(|r| r.pass_at_1).count() as f64 / n,
            pass_at_k: rs.iter().filter(|r| r.pass_at_k).count() as f64 / n,
            sc_at_k: rs.iter().filter(|r| r.sc_at_k).count() as f64 / n,
        }
    };
    let all: Vec<&EvalRecord> = records.iter().collect();
    let report = MetricsReport {
        k,
        overall: rollup(&all),
        per_category: per_category
            .into_iter()
            .map(|(cat, rs)| (cat, rollup(&rs)))
            .collect(),
    };
    Ok((records, report))
}

/// Majority vote over the rounded reported objectives of executable
/// samples. A strict plurality must exist (ties are incorrect) and its
/// value must match the rounded ground truth.
fn majority_matches(samples: &[SampleOutcome], w: &WorldDescriptor) -> bool {
    let mut votes: BTreeMap<String, usize> = BTreeMap::new();
    for s in samples {
        if s.breakdown.r_exec > 0.0 {
            if let Some(obj) = s.reported_objective {
                *votes.entry(format!("{:.2}", round2(obj))).or_default() += 1;
            }
        }
    }
    let Some(max) = votes.values().copied().max() else {
        return false;
    };
    let winners: Vec<&String> = votes
        .iter()
        .filter(|(_, n)| **n == max)
        .map(|(v, _)| v)
        .collect();
    if winners.len() != 1 {
        return false;
    }
    *winners[0] == format!("{:.2}", round2(w.objective_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::problem::Assignment;

    fn truth_candidate(w: &WorldDescriptor) -> Candidate {
        Candidate::from_ir(w.formulation.clone())
    }

    fn junk_candidate() -> Candidate {
        Candidate::from_bundle(Assignment::new(), f64::NAN)
    }

    fn wrong_but_executable(w: &WorldDescriptor, delta: f64) -> Candidate {
        // feasible origin point with a wrong claimed objective
        let assignment: Assignment = w
            .formulation
            .variables
            .iter()
            .map(|v| (v.name.clone(), 0.0))
            .collect();
        Candidate::from_bundle(assignment, w.objective_value + delta)
    }

    #[test]
    fn all_truth_scores_every_metric() {
        let w = fixtures::farming_lp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![truth_candidate(&w); 3],
        }];
        let (records, report) = evaluate(&[w], &sets, 3, &RewardConfig::default()).unwrap();
        assert!(records[0].pass_at_1 && records[0].pass_at_k && records[0].sc_at_k);
        assert_eq!(report.overall.pass_at_1, 1.0);
        assert_eq!(report.overall.sc_at_k, 1.0);
    }

    #[test]
    fn one_correct_of_three_distinct_fails_majority_but_passes_any() {
        let w = fixtures::farming_lp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![
                wrong_but_executable(&w, 10.0),
                truth_candidate(&w),
                wrong_but_executable(&w, 20.0),
            ],
        }];
        let (records, _) = evaluate(&[w], &sets, 3, &RewardConfig::default()).unwrap();
        assert!(!records[0].pass_at_1);
        assert!(records[0].pass_at_k);
        assert!(!records[0].sc_at_k, "three distinct objectives tie 1-1-1");
    }

    #[test]
    fn majority_tie_counts_incorrect() {
        let w = fixtures::farming_lp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![
                truth_candidate(&w),
                truth_candidate(&w),
                wrong_but_executable(&w, 5.0),
                wrong_but_executable(&w, 5.0),
            ],
        }];
        let (records, _) = evaluate(&[w], &sets, 4, &RewardConfig::default()).unwrap();
        assert!(!records[0].sc_at_k);
        assert!(records[0].pass_at_k);
    }

    #[test]
    fn non_executable_samples_do_not_vote() {
        let w = fixtures::farming_lp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![junk_candidate(), junk_candidate(), truth_candidate(&w)],
        }];
        let (records, _) = evaluate(&[w], &sets, 3, &RewardConfig::default()).unwrap();
        assert!(records[0].sc_at_k, "single executable vote is the majority");
    }

    #[test]
    fn shortfall_lists_offending_ids() {
        let w = fixtures::farming_lp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![truth_candidate(&w)],
        }];
        match evaluate(std::slice::from_ref(&w), &sets, 3, &RewardConfig::default()) {
            Err(Error::SampleShortfall { ids, .. }) => assert_eq!(ids, vec![w.id]),
            other => panic!("expected shortfall, got {other:?}"),
        }
    }

    #[test]
    fn pass1_bounded_by_passk_and_sck_bounded_by_passk() {
        let w = fixtures::warehouse_milp();
        let sets = vec![CandidateSet {
            problem_id: w.id.clone(),
            samples: vec![junk_candidate(), truth_candidate(&w), truth_candidate(&w)],
        }];
        let (_, report) = evaluate(&[w], &sets, 3, &RewardConfig::default()).unwrap();
        assert!(report.overall.pass_at_1 <= report.overall.pass_at_k);
        assert!(report.overall.sc_at_k <= report.overall.pass_at_k);
    }
}
