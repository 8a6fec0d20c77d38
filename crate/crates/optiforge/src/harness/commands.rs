//! Library-side implementations of the CLI subcommands: thin file-in,
//! file-out orchestration over the core modules.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curriculum::{
    advance, DifficultyGatedOracle, ExternalPolicy, PhaseState, Policy, ReplayPolicy, ScriptedFail,
    ScriptedOracle,
};
use crate::describe::{render_description, verify_description, FiveCheckReport, HttpTextClient};
use crate::instancer::{generate_dataset, Family, TemplateSpec};
use crate::problem::{
    Assignment, Category, Difficulty, FormulationIR, SolveStatus, WorldDescriptor,
};
use crate::reward::{score_candidate, RewardBreakdown};
use crate::{solver, Error, Result};

use super::config::HarnessConfig;
use super::eval::{evaluate, CandidateSet, EvalMode, EvalRecord, MetricsReport};
use super::jsonl::{read_jsonl, write_jsonl};

/// Arguments of the dataset generation command.
#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub category: Category,
    pub family: Option<Family>,
    pub count: usize,
    pub seed: u64,
    pub difficulty: Difficulty,
    pub out: PathBuf,
    /// Sidecar report path; defaults to `<out>.report.json`.
    pub report: Option<PathBuf>,
}

/// Generate a dataset JSONL plus its sidecar batch report.
pub fn run_generate(args: &GenerateArgs) -> Result<crate::instancer::GenBatchReport> {
    let family = match args.family {
        Some(f) => f,
        None => match args.category {
            Category::Lp => Family::ResourceAllocation,
            Category::Milp => Family::Knapsack,
            Category::Pump => Family::PumpNetwork,
        },
    };
    if family.category() != args.category {
        return Err(Error::Config(format!(
            "family {} belongs to category {}, not {}",
            family.slug(),
            family.category(),
            args.category
        )));
    }
    let template = TemplateSpec::new(family, args.difficulty);
    let (descriptors, report) = generate_dataset(&template, args.count, args.seed)?;
    write_jsonl(&args.out, &descriptors)?;
    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.report.json", args.out.display())));
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

/// One solved input line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub status: SolveStatus,
    pub assignment: Assignment,
    pub objective: f64,
    pub diagnostics: String,
}

/// Solve every line of a JSONL file holding world descriptors or bare
/// formulations.
pub fn run_solve(input: &Path, out: Option<&Path>) -> Result<Vec<SolveRecord>> {
    let lines: Vec<serde_json::Value> = read_jsonl(input)?;
    let mut records = Vec::new();
    for (i, value) in lines.into_iter().enumerate() {
        let (id, ir): (Option<String>, FormulationIR) = if value.get("formulation").is_some() {
            let w: WorldDescriptor =
                serde_json::from_value(value).map_err(|e| Error::JsonlParse {
                    path: input.display().to_string(),
                    line: i + 1,
                    detail: e.to_string(),
                })?;
            (Some(w.id), w.formulation)
        } else {
            let ir: FormulationIR =
                serde_json::from_value(value).map_err(|e| Error::JsonlParse {
                    path: input.display().to_string(),
                    line: i + 1,
                    detail: e.to_string(),
                })?;
            (None, ir)
        };
        let solution = solver::solve(&ir)?;
        records.push(SolveRecord {
            id,
            status: solution.status,
            assignment: solution.assignment,
            objective: solution.objective,
            diagnostics: solution.diagnostics,
        });
    }
    if let Some(path) = out {
        write_jsonl(path, &records)?;
    }
    Ok(records)
}

/// Per-descriptor verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub id: String,
    pub pass: bool,
    pub report: FiveCheckReport,
}

/// Render each descriptor deterministically and run the five checks.
pub fn run_verify(dataset: &Path, out: Option<&Path>) -> Result<Vec<VerifyRecord>> {
    let descriptors: Vec<WorldDescriptor> = read_jsonl(dataset)?;
    let mut records = Vec::new();
    for w in &descriptors {
        let record = match render_description(w, 0) {
            Ok(d) => {
                let report = verify_description(&d, w);
                VerifyRecord {
                    id: w.id.clone(),
                    pass: report.pass(),
                    report,
                }
            }
            Err(e) => VerifyRecord {
                id: w.id.clone(),
                pass: false,
                report: FiveCheckReport {
                    data_values_present: false,
                    constraints_present: false,
                    objective_correct: false,
                    parameters_described: false,
                    self_consistent: false,
                    failures: vec![format!("rendering failed: {e}")],
                },
            },
        };
        records.push(record);
    }
    if let Some(path) = out {
        write_jsonl(path, &records)?;
    }
    Ok(records)
}

/// One scored sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardRecord {
    pub problem_id: String,
    pub sample_index: usize,
    pub breakdown: RewardBreakdown,
}

/// Score every candidate sample against its problem's ground truth.
pub fn run_reward(
    dataset: &Path,
    candidates: &Path,
    config: &HarnessConfig,
    out: Option<&Path>,
) -> Result<Vec<RewardRecord>> {
    let descriptors: Vec<WorldDescriptor> = read_jsonl(dataset)?;
    let sets: Vec<CandidateSet> = read_jsonl(candidates)?;
    let by_id: std::collections::BTreeMap<&str, &WorldDescriptor> =
        descriptors.iter().map(|w| (w.id.as_str(), w)).collect();
    let mut records = Vec::new();
    for set in &sets {
        let w = by_id
            .get(set.problem_id.as_str())
            .ok_or_else(|| Error::Config(format!("unknown problem_id `{}`", set.problem_id)))?;
        for (i, cand) in set.samples.iter().enumerate() {
            let scored = score_candidate(cand, w, &config.reward);
            records.push(RewardRecord {
                problem_id: set.problem_id.clone(),
                sample_index: i,
                breakdown: scored.breakdown,
            });
        }
    }
    if let Some(path) = out {
        write_jsonl(path, &records)?;
    }
    Ok(records)
}

/// Evaluate candidates against a dataset with pass@1 / pass@k / sc@k.
pub fn run_eval(
    dataset: &Path,
    candidates: &Path,
    k: usize,
    mode: EvalMode,
    config: &HarnessConfig,
    out: Option<&Path>,
) -> Result<(Vec<EvalRecord>, MetricsReport)> {
    let descriptors: Vec<WorldDescriptor> = read_jsonl(dataset)?;
    let sets: Vec<CandidateSet> = read_jsonl(candidates)?;
    let (records, report) = evaluate(&descriptors, &sets, k, &config.reward)?;
    if let Some(path) = out {
        match mode {
            EvalMode::Summary => std::fs::write(path, serde_json::to_string_pretty(&report)?)?,
            EvalMode::Detailed => write_jsonl(path, &records)?,
        }
    }
    Ok((records, report))
}

/// Parse a policy specifier: `fail`, `oracle:<p>`, `replay:<path>`,
/// `easy-only`, or `external`.
pub fn parse_policy(spec: &str) -> Result<Box<dyn Policy>> {
    if spec == "fail" {
        return Ok(Box::new(ScriptedFail));
    }
    if spec == "easy-only" {
        return Ok(Box::new(DifficultyGatedOracle {
            solves: Difficulty::Easy,
        }));
    }
    if let Some(p) = spec.strip_prefix("oracle:") {
        let rate: f64 = p
            .parse()
            .map_err(|_| Error::Config(format!("bad oracle rate `{p}`")))?;
        return Ok(Box::new(ScriptedOracle { success_rate: rate }));
    }
    if let Some(path) = spec.strip_prefix("replay:") {
        let candidates = read_jsonl(Path::new(path))?;
        return Ok(Box::new(ReplayPolicy::new(candidates)));
    }
    if spec == "external" {
        return Ok(Box::new(ExternalPolicy {
            client: Box::new(HttpTextClient::from_env()?),
        }));
    }
    Err(Error::Config(format!("unknown policy spec `{spec}`")))
}

/// One curriculum transition attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub phase: u8,
    pub solvability: f64,
    pub advanced: bool,
    pub next_phase: u8,
}

/// Drive the phase schedule until it holds or reaches the terminal phase,
/// recording the solvability measured at every gate.
pub fn run_curriculum(
    policy_spec: &str,
    easy: &Path,
    hard: &Path,
    tau: f64,
    group: usize,
    seed: u64,
) -> Result<Vec<TransitionRecord>> {
    let policy = parse_policy(policy_spec)?;
    let easy_pool: Vec<WorldDescriptor> = read_jsonl(easy)?;
    let hard_pool: Vec<WorldDescriptor> = read_jsonl(hard)?;
    let mut state = PhaseState::start(tau, group);
    let mut records = Vec::new();
    loop {
        let outcome = advance(policy.as_ref(), &state, &easy_pool, &hard_pool, seed)?;
        records.push(TransitionRecord {
            phase: state.phase,
            solvability: outcome.solvability,
            advanced: outcome.advanced,
            next_phase: outcome.state.phase,
        });
        if !outcome.advanced {
            break;
        }
        state = outcome.state;
        if state.is_terminal() {
            break;
        }
    }
    Ok(records)
}
