//! Instance generation: standard-form templates are instantiated with
//! sampled parameters, solved for ground truth, filtered for validity, and
//! deduplicated.
//!
//! Linear templates are constructed around a designed interior optimum (the
//! objective is assembled from positive multipliers of the active rows), so
//! correctness is guaranteed by the standard form and confirmed by solver
//! execution. Sampling is fully programmatic and deterministic per
//! (template, seed); an external instantiation hook can replace the sampler
//! when callers want model-driven parameters.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::problem::{
    validate_descriptor, Assignment, Category, Comparator, Difficulty, FormulationIR,
    LinearConstraint, Metadata, Objective, Sense, SolveStatus, Variable, WorldDescriptor,
};
use crate::pump::{PumpInstance, PumpTypeParams};
use crate::{fixtures, round2, solver, Error, Result};

/// Problem families the generator knows how to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    // linear
    ResourceAllocation,
    Production,
    Blending,
    // mixed-integer
    Assignment,
    Scheduling,
    Packing,
    Routing,
    NetworkFlow,
    IntegerProgram,
    ProductionPlanning,
    Knapsack,
    SetCovering,
    // nonlinear
    PumpNetwork,
}

impl Family {
    pub fn category(self) -> Category {
        match self {
            Family::ResourceAllocation | Family::Production | Family::Blending => Category::Lp,
            Family::PumpNetwork => Category::Pump,
            _ => Category::Milp,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Family::ResourceAllocation => "resource-allocation",
            Family::Production => "production",
            Family::Blending => "blending",
            Family::Assignment => "assignment",
            Family::Scheduling => "scheduling",
            Family::Packing => "packing",
            Family::Routing => "routing",
            Family::NetworkFlow => "network-flow",
            Family::IntegerProgram => "integer-program",
            Family::ProductionPlanning => "production-planning",
            Family::Knapsack => "knapsack",
            Family::SetCovering => "set-covering",
            Family::PumpNetwork => "pump-network",
        }
    }

    pub fn all_milp() -> [Family; 9] {
        [
            Family::Assignment,
            Family::Scheduling,
            Family::Packing,
            Family::Routing,
            Family::NetworkFlow,
            Family::IntegerProgram,
            Family::ProductionPlanning,
            Family::Knapsack,
            Family::SetCovering,
        ]
    }

    pub fn all_lp() -> [Family; 3] {
        [
            Family::ResourceAllocation,
            Family::Production,
            Family::Blending,
        ]
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Family::ResourceAllocation,
            Family::Production,
            Family::Blending,
            Family::Assignment,
            Family::Scheduling,
            Family::Packing,
            Family::Routing,
            Family::NetworkFlow,
            Family::IntegerProgram,
            Family::ProductionPlanning,
            Family::Knapsack,
            Family::SetCovering,
            Family::PumpNetwork,
        ];
        all.iter()
            .find(|f| f.slug() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown family `{s}`")))
    }
}

/// A sampling recipe for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub category: Category,
    pub family: Family,
    /// Inclusive bounds on the number of decision variables to draw.
    pub var_range: (usize, usize),
    /// Magnitude scale applied to sampled coefficients.
    pub coeff_scale: f64,
    pub difficulty: Difficulty,
    /// Scenario labels the renderer writes against; one is drawn per
    /// instance.
    pub scenarios: Vec<String>,
}

const SCENARIOS: [&str; 8] = [
    "manufacturing",
    "logistics",
    "agriculture",
    "energy",
    "retail",
    "chemical processing",
    "food production",
    "textiles",
];

impl TemplateSpec {
    pub fn new(family: Family, difficulty: Difficulty) -> Self {
        let var_range = match family {
            Family::ResourceAllocation | Family::Production | Family::Blending => (4, 12),
            Family::Assignment => (4, 9),
            Family::Scheduling => (4, 6),
            Family::Packing => (4, 8),
            Family::Routing => (4, 6),
            Family::NetworkFlow => (4, 6),
            Family::IntegerProgram => (4, 7),
            Family::ProductionPlanning => (6, 10),
            Family::Knapsack => (4, 8),
            Family::SetCovering => (4, 6),
            Family::PumpNetwork => match difficulty {
                Difficulty::Easy => (2, 4),
                Difficulty::Hard => (4, 6),
            },
        };
        TemplateSpec {
            category: family.category(),
            family,
            var_range,
            coeff_scale: 1.0,
            difficulty,
            scenarios: SCENARIOS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.category != self.family.category() {
            return Err(Error::Config(format!(
                "family {} belongs to category {}, not {}",
                self.family.slug(),
                self.family.category(),
                self.category
            )));
        }
        if self.var_range.0 < 2 || self.var_range.1 > 20 || self.var_range.0 > self.var_range.1 {
            return Err(Error::Config(format!(
                "variable-count range {:?} outside [2, 20]",
                self.var_range
            )));
        }
        if self.scenarios.is_empty() {
            return Err(Error::Config("empty scenario pool".into()));
        }
        if self.coeff_scale <= 0.0 {
            return Err(Error::Config("coefficient scale must be positive".into()));
        }
        Ok(())
    }
}

/// Why a sampled candidate was discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Infeasible,
    TrivialVariables,
    Duplicate,
    SolverFailure,
}

/// Bookkeeping for one generation batch.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GenBatchReport {
    pub requested: usize,
    pub accepted: usize,
    pub rejected_infeasible: usize,
    pub rejected_trivial: usize,
    pub rejected_duplicate: usize,
    pub rejected_solver_failure: usize,
}

impl GenBatchReport {
    pub fn attempts(&self) -> usize {
        self.accepted
            + self.rejected_infeasible
            + self.rejected_trivial
            + self.rejected_duplicate
            + self.rejected_solver_failure
    }

    fn tally(&mut self, reason: RejectReason) {
        match reason {
            RejectReason::Infeasible => self.rejected_infeasible += 1,
            RejectReason::TrivialVariables => self.rejected_trivial += 1,
            RejectReason::Duplicate => self.rejected_duplicate += 1,
            RejectReason::SolverFailure => self.rejected_solver_failure += 1,
        }
    }
}

/// Accept/reject decision for a solved descriptor: the solver must have
/// found an optimum and at most a quarter of the variables (pump: inactive
/// types) may sit at their lower bounds.
pub fn filter_valid(w: &WorldDescriptor) -> (bool, Option<RejectReason>) {
    let report = validate_descriptor(w);
    if !report.feasible {
        return (false, Some(RejectReason::Infeasible));
    }
    if !report.complexity_pass {
        return (false, Some(RejectReason::TrivialVariables));
    }
    (true, None)
}

fn dedup_key_solution(w: &WorldDescriptor) -> String {
    let norm = |x: f64| {
        let v = round2(x);
        if v == 0.0 {
            0.0
        } else {
            v
        }
    };
    let mut s = format!("{:.2}", norm(w.objective_value));
    for (name, value) in &w.solution {
        s.push_str(&format!("|{name}={:.2}", norm(*value)));
    }
    s
}

fn dedup_key_ir(w: &WorldDescriptor) -> String {
    crate::problem::canonicalize(&w.formulation)
        .map(|c| c.canonical_json())
        .unwrap_or_else(|_| w.formulation.canonical_json())
}

/// Drop later descriptors whose rounded (objective, solution) pair or whose
/// canonical formulation matches an earlier one.
pub fn dedup(batch: &[WorldDescriptor]) -> Vec<WorldDescriptor> {
    let mut seen_solutions = std::collections::BTreeSet::new();
    let mut seen_irs = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for w in batch {
        let ks = dedup_key_solution(w);
        let ki = dedup_key_ir(w);
        if seen_solutions.contains(&ks) || seen_irs.contains(&ki) {
            continue;
        }
        seen_solutions.insert(ks);
        seen_irs.insert(ki);
        out.push(w.clone());
    }
    out
}

/// Callers may swap the programmatic sampler for an external proposer (for
/// example a structured-output language model); proposals still pass
/// through solving and validity filtering unchanged.
pub trait InstantiationHook {
    fn propose(&self, template: &TemplateSpec, seed: u64) -> Result<(FormulationIR, Metadata)>;
}

fn derive_seed(seed: u64, k: u64) -> u64 {
    // splitmix-style stream split
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

enum Attempt {
    Accepted(Box<WorldDescriptor>),
    Rejected(RejectReason),
}

fn attempt_one(template: &TemplateSpec, sub_seed: u64, id: &str) -> Attempt {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let sampled = match sample_candidate(template, &mut rng) {
        Ok(s) => s,
        Err(_) => return Attempt::Rejected(RejectReason::SolverFailure),
    };
    build_descriptor(sampled, id, template.difficulty)
}

fn build_descriptor(
    sampled: (FormulationIR, Metadata),
    id: &str,
    difficulty: Difficulty,
) -> Attempt {
    let (formulation, metadata) = sampled;
    if formulation.validate().is_err() {
        return Attempt::Rejected(RejectReason::SolverFailure);
    }
    let solution = match solver::solve(&formulation) {
        Ok(s) => s,
        Err(_) => return Attempt::Rejected(RejectReason::SolverFailure),
    };
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible | SolveStatus::Unbounded => {
            return Attempt::Rejected(RejectReason::Infeasible)
        }
        SolveStatus::IterationLimit => return Attempt::Rejected(RejectReason::SolverFailure),
    }
    let w = WorldDescriptor {
        id: id.to_string(),
        formulation,
        solution: solution.assignment,
        objective_value: solution.objective,
        metadata,
        difficulty,
    };
    match filter_valid(&w) {
        (true, _) => Attempt::Accepted(Box::new(w)),
        (false, Some(reason)) => Attempt::Rejected(reason),
        (false, None) => Attempt::Rejected(RejectReason::SolverFailure),
    }
}

/// Attempts allowed per requested instance before giving up.
pub const RESAMPLE_CAP: usize = 50;

/// Instantiate one descriptor. Deterministic for a fixed (template, seed):
/// up to [`RESAMPLE_CAP`] candidates are drawn from the seed's stream and
/// the first one passing the validity filter is returned.
pub fn instantiate(template: &TemplateSpec, seed: u64) -> Result<WorldDescriptor> {
    template.validate()?;
    let id = format!("{}-{seed}", template.family.slug());
    for attempt in 0..RESAMPLE_CAP {
        match attempt_one(template, derive_seed(seed, attempt as u64), &id) {
            Attempt::Accepted(w) => return Ok(*w),
            Attempt::Rejected(_) => continue,
        }
    }
    Err(Error::GenerationFailure(format!(
        "no valid {} instance within {RESAMPLE_CAP} attempts at seed {seed}",
        template.family.slug()
    )))
}

/// Instantiate through an external hook instead of the built-in sampler.
pub fn instantiate_with_hook(
    template: &TemplateSpec,
    seed: u64,
    hook: &dyn InstantiationHook,
) -> Result<WorldDescriptor> {
    template.validate()?;
    let id = format!("{}-{seed}", template.family.slug());
    for attempt in 0..RESAMPLE_CAP {
        let sub = derive_seed(seed, attempt as u64);
        let proposal = hook.propose(template, sub)?;
        if let Attempt::Accepted(w) = build_descriptor(proposal, &id, template.difficulty) {
            return Ok(*w);
        }
    }
    Err(Error::GenerationFailure(format!(
        "hook produced no valid instance within {RESAMPLE_CAP} attempts at seed {seed}"
    )))
}

/// Generate exactly `count` accepted, deduplicated descriptors.
pub fn generate_dataset(
    template: &TemplateSpec,
    count: usize,
    seed: u64,
) -> Result<(Vec<WorldDescriptor>, GenBatchReport)> {
    template.validate()?;
    if count == 0 {
        return Err(Error::GenerationFailure("count must be at least 1".into()));
    }
    let mut report = GenBatchReport {
        requested: count,
        ..GenBatchReport::default()
    };
    let mut accepted: Vec<WorldDescriptor> = Vec::with_capacity(count);
    let mut seen_solutions = std::collections::BTreeSet::new();
    let mut seen_irs = std::collections::BTreeSet::new();
    let budget = RESAMPLE_CAP * count;
    let mut k = 0u64;
    while accepted.len() < count {
        if report.attempts() >= budget {
            return Err(Error::GenerationFailure(format!(
                "acceptance rate too low: {} accepted of {} attempts (budget {budget})",
                accepted.len(),
                report.attempts()
            )));
        }
        let id = format!("{}-{seed}-{:04}", template.family.slug(), accepted.len());
        match attempt_one(template, derive_seed(seed, k), &id) {
            Attempt::Accepted(w) => {
                let ks = dedup_key_solution(&w);
                let ki = dedup_key_ir(&w);
                if seen_solutions.contains(&ks) || seen_irs.contains(&ki) {
                    report.tally(RejectReason::Duplicate);
                } else {
                    seen_solutions.insert(ks);
                    seen_irs.insert(ki);
                    accepted.push(*w);
                    report.accepted += 1;
                }
            }
            Attempt::Rejected(reason) => report.tally(reason),
        }
        k += 1;
    }
    Ok((accepted, report))
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

const ITEMS: [&str; 12] = [
    "alpha", "bravo", "carbon", "delta", "ember", "falcon", "granite", "harbor", "indigo",
    "juniper", "krypton", "lumen",
];

const RESOURCES: [&str; 8] = [
    "machine hours",
    "labor hours",
    "raw material",
    "water supply",
    "energy budget",
    "storage space",
    "inspection capacity",
    "packaging line",
];

fn money(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    round2(rng.random_range(lo..hi))
}

fn pick_scenario(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> String {
    template.scenarios[rng.random_range(0..template.scenarios.len())].clone()
}

fn sample_candidate(
    template: &TemplateSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(FormulationIR, Metadata)> {
    Ok(match template.family {
        Family::ResourceAllocation => sample_resource_allocation(template, rng),
        Family::Production => sample_production(template, rng),
        Family::Blending => sample_blending(template, rng),
        Family::Knapsack => sample_knapsack(template, rng),
        Family::Assignment => sample_assignment(template, rng),
        Family::Scheduling => sample_scheduling(template, rng),
        Family::Packing => sample_packing(template, rng),
        Family::Routing => sample_routing(template, rng),
        Family::NetworkFlow => sample_network_flow(template, rng),
        Family::IntegerProgram => sample_integer_program(template, rng),
        Family::ProductionPlanning => sample_production_planning(template, rng),
        Family::SetCovering => sample_set_covering(template, rng),
        Family::PumpNetwork => sample_pump(template, rng)?,
    })
}

fn base_metadata(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> Metadata {
    Metadata {
        scenario: pick_scenario(template, rng),
        ..Metadata::default()
    }
}

/// Maximization LP whose optimum is a designed interior vertex: the
/// objective is a positive combination of the active resource rows.
fn sample_resource_allocation(
    template: &TemplateSpec,
    rng: &mut ChaCha8Rng,
) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let scale = template.coeff_scale;
    let names: Vec<String> = (0..n).map(|j| format!("make_{}", ITEMS[j])).collect();
    let target: Vec<f64> = (0..n).map(|_| money(rng, 2.0, 14.0)).collect();

    // n active rows, diagonally dominant so the vertex is well conditioned
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n).map(|_| money(rng, 0.5, 3.5) * scale).collect();
        row[i] += 3.0 * scale * n as f64 / 4.0;
        row[i] = round2(row[i]);
        rows.push(row);
    }
    let mut constraints = Vec::new();
    let mut metadata = base_metadata(template, rng);
    for (i, row) in rows.iter().enumerate() {
        let rhs: f64 = row.iter().zip(target.iter()).map(|(a, t)| a * t).sum();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(row.iter().copied())
            .collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Le, round2(rhs)));
        metadata
            .constraint_labels
            .insert(i, RESOURCES[i % RESOURCES.len()].to_string());
    }
    // loose extra rows
    let extra = rng.random_range(1..=2);
    for e in 0..extra {
        let row: Vec<f64> = (0..n).map(|_| money(rng, 0.2, 2.0) * scale).collect();
        let tight: f64 = row.iter().zip(target.iter()).map(|(a, t)| a * t).sum();
        let rhs = round2(tight * rng.random_range(1.15..1.4));
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(row.iter().copied())
            .collect();
        metadata
            .constraint_labels
            .insert(n + e, RESOURCES[(n + e) % RESOURCES.len()].to_string());
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Le, rhs));
    }
    // profits from positive row multipliers
    let mult: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.5)).collect();
    let mut profits = vec![0.0; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            profits[j] += mult[i] * row[j];
        }
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|s| s.as_str())
        .zip(profits.iter().map(|p| round2(*p)))
        .collect();
    let variables = names
        .iter()
        .map(|nm| Variable::continuous(nm, 0.0, None))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "units".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Max, &obj, 0.0),
            category: Category::Lp,
            pump: None,
        },
        metadata,
    )
}

/// Minimization LP: meet output requirements from processes with designed
/// positive run levels.
fn sample_production(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let scale = template.coeff_scale;
    let names: Vec<String> = (0..n).map(|j| format!("run_{}", ITEMS[j])).collect();
    let target: Vec<f64> = (0..n).map(|_| money(rng, 3.0, 10.0)).collect();

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n).map(|_| money(rng, 0.3, 2.0) * scale).collect();
        row[i] += 2.5 * scale * n as f64 / 4.0;
        row[i] = round2(row[i]);
        rows.push(row);
    }
    let mut constraints = Vec::new();
    let mut metadata = base_metadata(template, rng);
    for (i, row) in rows.iter().enumerate() {
        let rhs: f64 = row.iter().zip(target.iter()).map(|(a, t)| a * t).sum();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(row.iter().copied())
            .collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, round2(rhs)));
        metadata
            .constraint_labels
            .insert(i, format!("output requirement {}", ITEMS[i]));
    }
    let mult: Vec<f64> = (0..n).map(|_| rng.random_range(0.4..2.0)).collect();
    let mut costs = vec![0.0; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            costs[j] += mult[i] * row[j];
        }
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|s| s.as_str())
        .zip(costs.iter().map(|c| round2(*c)))
        .collect();
    let variables: Vec<Variable> = names
        .iter()
        .zip(target.iter())
        .map(|(nm, t)| Variable::continuous(nm, 0.0, Some(round2(t * rng.random_range(1.4..1.9)))))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "batches".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Min, &obj, 0.0),
            category: Category::Lp,
            pump: None,
        },
        metadata,
    )
}

/// Blending LP: fixed batch size plus quality floors, cost-minimal mix.
fn sample_blending(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..n).map(|j| format!("blend_{}", ITEMS[j])).collect();
    let target: Vec<f64> = (0..n).map(|_| money(rng, 2.0, 9.0)).collect();
    let batch: f64 = round2(target.iter().sum());

    let mut constraints = Vec::new();
    let mut metadata = base_metadata(template, rng);
    let all_ones: Vec<(&str, f64)> = names.iter().map(|s| (s.as_str(), 1.0)).collect();
    constraints.push(LinearConstraint::new(&all_ones, Comparator::Eq, batch));
    metadata.constraint_labels.insert(0, "batch size".into());

    // n-1 quality rows tight at the designed mix
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..n - 1 {
        let mut row: Vec<f64> = (0..n).map(|_| money(rng, 1.0, 9.0)).collect();
        row[i] += 6.0;
        row[i] = round2(row[i]);
        let rhs: f64 = row.iter().zip(target.iter()).map(|(a, t)| a * t).sum();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(row.iter().copied())
            .collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, round2(rhs)));
        metadata
            .constraint_labels
            .insert(i + 1, format!("quality floor {}", i + 1));
        rows.push(row);
    }
    let y0 = rng.random_range(0.5..2.0);
    let mult: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.3..1.5)).collect();
    let mut costs = vec![y0; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            costs[j] += mult[i] * row[j];
        }
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|s| s.as_str())
        .zip(costs.iter().map(|c| round2(*c)))
        .collect();
    let variables = names
        .iter()
        .map(|nm| Variable::continuous(nm, 0.0, None))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "tons".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Min, &obj, 0.0),
            category: Category::Lp,
            pump: None,
        },
        metadata,
    )
}

fn sample_knapsack(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..n).map(|j| format!("take_{}", ITEMS[j])).collect();
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(10..120) as f64).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(5..40) as f64).collect();
    let cap = (weights.iter().sum::<f64>() * 0.85).floor();

    let mut metadata = base_metadata(template, rng);
    let mut constraints = vec![LinearConstraint::new(
        &names
            .iter()
            .map(|s| s.as_str())
            .zip(weights.iter().copied())
            .collect::<Vec<_>>(),
        Comparator::Le,
        cap,
    )];
    metadata.constraint_labels.insert(0, "weight limit".into());
    if rng.random_bool(0.5) {
        let volumes: Vec<f64> = (0..n).map(|_| rng.random_range(2..20) as f64).collect();
        let vcap = (volumes.iter().sum::<f64>() * 0.9).floor();
        constraints.push(LinearConstraint::new(
            &names
                .iter()
                .map(|s| s.as_str())
                .zip(volumes.iter().copied())
                .collect::<Vec<_>>(),
            Comparator::Le,
            vcap,
        ));
        metadata.constraint_labels.insert(1, "volume limit".into());
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|s| s.as_str())
        .zip(values.iter().copied())
        .collect();
    let variables = names.iter().map(|nm| Variable::binary(nm)).collect();
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Max, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Capacitated transportation with integer shipment cells; per-cell caps
/// force demand to split across suppliers.
fn sample_assignment(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let shapes = [(2usize, 2usize), (2, 3), (3, 3)];
    let (m, n) = shapes[rng.random_range(0..shapes.len())];
    let mut metadata = base_metadata(template, rng);
    let demand: Vec<f64> = (0..n).map(|_| rng.random_range(4..12) as f64).collect();
    let cap_factor = if m == 2 { 0.7 } else { 0.45 };

    let mut variables = Vec::new();
    let mut obj = Vec::new();
    let mut names = vec![vec![String::new(); n]; m];
    for (i, row) in names.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let nm = format!("ship_{}_{}", ITEMS[i], ITEMS[m + j]);
            let cap = (demand[j] * cap_factor).ceil();
            variables.push(Variable::integer(&nm, 0.0, Some(cap)));
            obj.push((nm.clone(), rng.random_range(3..15) as f64));
            *cell = nm;
        }
    }
    let mut constraints = Vec::new();
    let total_demand: f64 = demand.iter().sum();
    for (i, row) in names.iter().enumerate() {
        let coeffs: Vec<(&str, f64)> = row.iter().map(|nm| (nm.as_str(), 1.0)).collect();
        let supply = (total_demand / m as f64 * rng.random_range(1.1..1.4)).ceil();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Le, supply));
        metadata
            .constraint_labels
            .insert(i, format!("supply at {}", ITEMS[i]));
    }
    for j in 0..n {
        let coeffs: Vec<(&str, f64)> = (0..m).map(|i| (names[i][j].as_str(), 1.0)).collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, demand[j]));
        metadata
            .constraint_labels
            .insert(m + j, format!("demand of {}", ITEMS[m + j]));
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective {
                sense: Sense::Min,
                coeffs: obj.into_iter().collect(),
                offset: 0.0,
            },
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Cyclic shift staffing: each shift covers two consecutive periods.
fn sample_scheduling(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let s = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..s).map(|i| format!("shift_{}", ITEMS[i])).collect();
    let mut metadata = base_metadata(template, rng);
    let variables: Vec<Variable> = names
        .iter()
        .map(|nm| Variable::integer(nm, 0.0, Some(12.0)))
        .collect();
    let mut constraints = Vec::new();
    for p in 0..s {
        // covered by shift p and shift p-1 (cyclic)
        let prev = (p + s - 1) % s;
        let coeffs = vec![(names[p].as_str(), 1.0), (names[prev].as_str(), 1.0)];
        let d = rng.random_range(3..10) as f64;
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, d));
        metadata
            .constraint_labels
            .insert(p, format!("staff demand in period {}", p + 1));
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), rng.random_range(8..16) as f64))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "workers".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Min, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

fn sample_packing(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..n).map(|j| format!("load_{}", ITEMS[j])).collect();
    let mut metadata = base_metadata(template, rng);
    let counts: Vec<f64> = (0..n).map(|_| rng.random_range(2..6) as f64).collect();
    let variables: Vec<Variable> = names
        .iter()
        .zip(counts.iter())
        .map(|(nm, c)| Variable::integer(nm, 0.0, Some(*c)))
        .collect();
    let mut constraints = Vec::new();
    let dims = if rng.random_bool(0.5) { 3 } else { 2 };
    let dim_names = ["weight capacity", "volume capacity", "deck area"];
    for (d, dim_name) in dim_names.iter().enumerate().take(dims) {
        let use_per: Vec<f64> = (0..n).map(|_| rng.random_range(3..25) as f64).collect();
        let total: f64 = use_per.iter().zip(counts.iter()).map(|(u, c)| u * c).sum();
        let cap = (total * 0.8).floor();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(use_per.iter().copied())
            .collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Le, cap));
        metadata.constraint_labels.insert(d, (*dim_name).into());
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), rng.random_range(15..90) as f64))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "crates".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Max, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Chain-structured dispatch: route r serves regions r-1 and r.
fn sample_routing(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let r = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..r).map(|i| format!("trucks_{}", ITEMS[i])).collect();
    let mut metadata = base_metadata(template, rng);
    let variables: Vec<Variable> = names
        .iter()
        .map(|nm| Variable::integer(nm, 0.0, Some(6.0)))
        .collect();
    let caps: Vec<f64> = (0..r).map(|_| rng.random_range(4..9) as f64).collect();
    let mut constraints = Vec::new();
    for g in 0..r - 1 {
        let coeffs = vec![
            (names[g].as_str(), caps[g]),
            (names[g + 1].as_str(), caps[g + 1]),
        ];
        let d = rng.random_range(8..20) as f64;
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, d));
        metadata
            .constraint_labels
            .insert(g, format!("deliveries for region {}", g + 1));
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), rng.random_range(20..60) as f64))
        .collect();
    for nm in &names {
        metadata.units.insert(nm.clone(), "trucks".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Min, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Two-layer min-cost flow with integer arc flows and conservation at the
/// middle nodes.
fn sample_network_flow(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let mids = rng.random_range(2..=3);
    let mut metadata = base_metadata(template, rng);
    let mut variables = Vec::new();
    let mut obj = Vec::new();
    let mut in_names = Vec::new();
    let mut out_names = Vec::new();
    let mut caps = Vec::new();
    for item in ITEMS.iter().take(mids) {
        let inn = format!("flow_src_{item}");
        let out = format!("flow_{item}_sink");
        let cap = rng.random_range(5..14) as f64;
        variables.push(Variable::integer(&inn, 0.0, Some(cap)));
        variables.push(Variable::integer(&out, 0.0, Some(cap)));
        obj.push((inn.clone(), rng.random_range(2..9) as f64));
        obj.push((out.clone(), rng.random_range(2..9) as f64));
        in_names.push(inn);
        out_names.push(out);
        caps.push(cap);
    }
    let mut constraints = Vec::new();
    for i in 0..mids {
        constraints.push(LinearConstraint::new(
            &[(in_names[i].as_str(), 1.0), (out_names[i].as_str(), -1.0)],
            Comparator::Eq,
            0.0,
        ));
        metadata
            .constraint_labels
            .insert(i, format!("conservation at hub {}", ITEMS[i]));
    }
    let total_cap: f64 = caps.iter().sum();
    let demand = (total_cap * 0.8).floor().max(1.0);
    let coeffs: Vec<(&str, f64)> = out_names.iter().map(|nm| (nm.as_str(), 1.0)).collect();
    constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, demand));
    metadata
        .constraint_labels
        .insert(mids, "sink demand".into());
    for nm in in_names.iter().chain(out_names.iter()) {
        metadata.units.insert(nm.clone(), "pallets".into());
    }
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective {
                sense: Sense::Min,
                coeffs: obj.into_iter().collect(),
                offset: 0.0,
            },
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Generic ILP built around a designed integer vertex.
fn sample_integer_program(
    template: &TemplateSpec,
    rng: &mut ChaCha8Rng,
) -> (FormulationIR, Metadata) {
    let n = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..n).map(|j| format!("x_{}", ITEMS[j])).collect();
    let target: Vec<f64> = (0..n).map(|_| rng.random_range(1..9) as f64).collect();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut row: Vec<f64> = (0..n).map(|_| rng.random_range(1..4) as f64).collect();
        row[i] += n as f64;
        rows.push(row);
    }
    let mut metadata = base_metadata(template, rng);
    let mut constraints = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rhs: f64 = row.iter().zip(target.iter()).map(|(a, t)| a * t).sum();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(row.iter().copied())
            .collect();
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Le, rhs));
        metadata
            .constraint_labels
            .insert(i, RESOURCES[i % RESOURCES.len()].to_string());
    }
    let mult: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let mut gains = vec![0.0; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            gains[j] += mult[i] * row[j];
        }
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|s| s.as_str())
        .zip(gains.iter().map(|g| round2(*g)))
        .collect();
    let variables: Vec<Variable> = names
        .iter()
        .map(|nm| Variable::integer(nm, 0.0, Some(20.0)))
        .collect();
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Max, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Fixed-charge production: binary line switches with linked quantities and
/// a demand floor high enough to keep most lines open.
fn sample_production_planning(
    template: &TemplateSpec,
    rng: &mut ChaCha8Rng,
) -> (FormulationIR, Metadata) {
    let lines = rng.random_range(3..=(template.var_range.1 / 2).max(3));
    let mut metadata = base_metadata(template, rng);
    let mut variables = Vec::new();
    let mut obj = Vec::new();
    let mut constraints = Vec::new();
    let mut qty_names = Vec::new();
    let mut caps = Vec::new();
    for (i, item) in ITEMS.iter().enumerate().take(lines) {
        let open = format!("open_{item}");
        let qty = format!("qty_{item}");
        let cap = rng.random_range(6..16) as f64;
        variables.push(Variable::binary(&open));
        variables.push(Variable::integer(&qty, 0.0, Some(cap)));
        obj.push((open.clone(), rng.random_range(15..40) as f64));
        obj.push((qty.clone(), rng.random_range(3..9) as f64));
        constraints.push(LinearConstraint::new(
            &[(qty.as_str(), 1.0), (open.as_str(), -cap)],
            Comparator::Le,
            0.0,
        ));
        metadata
            .constraint_labels
            .insert(i, format!("line {item} linkage"));
        metadata
            .roles
            .insert(open.clone(), "binary open/close switch".into());
        qty_names.push(qty);
        caps.push(cap);
    }
    let total: f64 = caps.iter().sum();
    let demand = (total * 0.82).floor();
    let coeffs: Vec<(&str, f64)> = qty_names.iter().map(|nm| (nm.as_str(), 1.0)).collect();
    constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, demand));
    metadata
        .constraint_labels
        .insert(lines, "total demand".into());
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective {
                sense: Sense::Min,
                coeffs: obj.into_iter().collect(),
                offset: 0.0,
            },
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Cyclic multicover: element e is covered by sets e-1 and e; mixed
/// coverage demands keep most sets selected.
fn sample_set_covering(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> (FormulationIR, Metadata) {
    let s = rng.random_range(template.var_range.0..=template.var_range.1);
    let names: Vec<String> = (0..s).map(|i| format!("pick_{}", ITEMS[i])).collect();
    let mut metadata = base_metadata(template, rng);
    let variables: Vec<Variable> = names.iter().map(|nm| Variable::binary(nm)).collect();
    let mut constraints = Vec::new();
    for e in 0..s {
        let prev = (e + s - 1) % s;
        let coeffs = vec![(names[e].as_str(), 1.0), (names[prev].as_str(), 1.0)];
        let need = if rng.random_bool(0.7) { 2.0 } else { 1.0 };
        constraints.push(LinearConstraint::new(&coeffs, Comparator::Ge, need));
        metadata
            .constraint_labels
            .insert(e, format!("coverage of zone {}", e + 1));
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), rng.random_range(5..20) as f64))
        .collect();
    (
        FormulationIR {
            variables,
            constraints,
            objective: Objective::new(Sense::Min, &obj, 0.0),
            category: Category::Milp,
            pump: None,
        },
        metadata,
    )
}

/// Pump instances sampled around the reference coefficient table, with
/// operating targets derived from the sampled curves so instances are
/// feasible by construction.
fn sample_pump(template: &TemplateSpec, rng: &mut ChaCha8Rng) -> Result<(FormulationIR, Metadata)> {
    let reference = fixtures::pump_reference_instance();
    let (count, series_max, parallel_max) = match template.difficulty {
        Difficulty::Easy => (
            rng.random_range(1..=2usize),
            rng.random_range(1..=2u32),
            rng.random_range(1..=2u32),
        ),
        Difficulty::Hard => (rng.random_range(4..=template.var_range.1.clamp(4, 6)), 2, 2),
    };
    let mut types = Vec::new();
    for _ in 0..count {
        let base = &reference.types[rng.random_range(0..reference.types.len())];
        let s = |rng: &mut ChaCha8Rng| rng.random_range(0.5..1.5);
        types.push(PumpTypeParams {
            p_max: base.p_max, // adjusted below once curves are known
            fixed_cost: round2(base.fixed_cost * s(rng)),
            power_cost: round2(base.power_cost * s(rng)),
            m1: round2(base.m1 * s(rng)),
            m2: (base.m2 * s(rng) * 1e4).round() / 1e4,
            m3: (base.m3 * s(rng) * 1e7).round() / 1e7,
            m4: (base.m4 * s(rng) * 1e4).round() / 1e4,
            m5: round2(base.m5 * s(rng)),
            m6: (base.m6 * s(rng) * 1e6).round() / 1e6,
        });
    }
    let omega_max = round2(reference.omega_max * rng.random_range(0.7..1.3));
    let min_max_dp = types
        .iter()
        .map(|t| t.max_pressure_rise())
        .fold(f64::INFINITY, f64::min);
    let dp_total = round2(series_max as f64 * min_max_dp * rng.random_range(0.6..0.85));

    // per-type flow capacity given the pressure target
    let mut capacity = 0.0;
    let mut single_max: f64 = 0.0;
    for t in &types {
        let dp_req = dp_total / series_max as f64;
        let (_, hi) = t
            .flow_range(dp_req)
            .ok_or_else(|| Error::InfeasibleFlow("sampled pressure target unreachable".into()))?;
        capacity += hi * parallel_max as f64;
        single_max = single_max.max(hi * parallel_max as f64);
    }
    let v_total = if count == 1 {
        round2(capacity * rng.random_range(0.4..0.85))
    } else {
        // force more than any single type can carry so several stay active
        round2(
            (single_max * 1.05)
                .max(capacity * rng.random_range(0.7..0.88))
                .min(capacity * 0.93),
        )
    };
    // power caps with headroom above the operating envelope
    for t in types.iter_mut() {
        let dp_req = dp_total / series_max as f64;
        let (lo, hi) = t.flow_range(dp_req).expect("checked above");
        let mut p_peak: f64 = 0.0;
        for k in 0..=32 {
            let v = lo + (hi - lo) * k as f64 / 32.0;
            if let Some(r) = t.speed_ratio_for(dp_req, v) {
                p_peak = p_peak.max(t.power(r, v));
            }
        }
        t.p_max = round2((p_peak * rng.random_range(1.1..1.4)).max(1.0));
    }
    let inst = PumpInstance {
        v_total,
        dp_total,
        omega_max,
        series_max,
        parallel_max,
        types,
    };
    inst.validate()?;
    let mut metadata = Metadata {
        scenario: pick_scenario(template, rng),
        ..Metadata::default()
    };
    for i in 0..inst.types.len() {
        metadata
            .roles
            .insert(crate::pump::var_name("z", i), "binary on/off switch".into());
        metadata
            .roles
            .insert(crate::pump::var_name("x", i), "flow fraction".into());
    }
    Ok((fixtures::pump_formulation(inst), metadata))
}

// ---------------------------------------------------------------------------

/// Convenience: the ground-truth solution of a descriptor as an assignment.
pub fn ground_truth(w: &WorldDescriptor) -> &Assignment {
    &w.solution
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instantiate_is_deterministic() {
        let t = TemplateSpec::new(Family::ResourceAllocation, Difficulty::Easy);
        let a = instantiate(&t, 7).unwrap();
        let b = instantiate(&t, 7).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn knapsack_small_matches_enumeration() {
        let t = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
        let w = instantiate(&t, 1).unwrap();
        // brute-force oracle over all binary points
        let ir = &w.formulation;
        let n = ir.variables.len();
        let mut best = f64::NEG_INFINITY;
        for mask in 0..(1u32 << n) {
            let point: Assignment = ir
                .variables
                .iter()
                .enumerate()
                .map(|(j, v)| (v.name.clone(), ((mask >> j) & 1) as f64))
                .collect();
            if crate::problem::is_feasible(ir, &point).unwrap() {
                let obj = crate::problem::evaluate_objective(ir, &point).unwrap();
                best = best.max(obj);
            }
        }
        assert!((w.objective_value - best).abs() < 1e-9);
    }

    #[test]
    fn generated_instances_pass_validation() {
        for family in [
            Family::ResourceAllocation,
            Family::Production,
            Family::Blending,
            Family::Knapsack,
            Family::Scheduling,
            Family::SetCovering,
        ] {
            let t = TemplateSpec::new(family, Difficulty::Easy);
            let w = instantiate(&t, 3).unwrap();
            let rep = validate_descriptor(&w);
            assert!(rep.feasible, "{family:?}: {:?}", rep.messages);
            assert!(rep.complexity_pass, "{family:?}: {:?}", rep.messages);
        }
    }

    #[test]
    fn dataset_counts_and_report_are_consistent() {
        let t = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
        let (ws, report) = generate_dataset(&t, 8, 11).unwrap();
        assert_eq!(ws.len(), 8);
        assert_eq!(report.accepted, 8);
        assert_eq!(
            report.attempts(),
            report.accepted
                + report.rejected_infeasible
                + report.rejected_trivial
                + report.rejected_duplicate
                + report.rejected_solver_failure
        );
        // every emitted descriptor passes the filter and no pair collides
        for w in &ws {
            let (ok, _) = filter_valid(w);
            assert!(ok);
        }
        assert_eq!(dedup(&ws).len(), ws.len());
    }

    #[test]
    fn dataset_rerun_reproduces_identical_output_and_report() {
        let t = TemplateSpec::new(Family::Scheduling, Difficulty::Easy);
        let a = generate_dataset(&t, 12, 3).unwrap();
        let b = generate_dataset(&t, 12, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn external_hook_proposals_flow_through_the_same_filter() {
        struct FixtureHook;
        impl InstantiationHook for FixtureHook {
            fn propose(
                &self,
                _template: &TemplateSpec,
                _seed: u64,
            ) -> crate::Result<(FormulationIR, Metadata)> {
                let w = crate::fixtures::farming_lp();
                Ok((w.formulation, w.metadata))
            }
        }
        let t = TemplateSpec::new(Family::ResourceAllocation, Difficulty::Easy);
        let w = instantiate_with_hook(&t, 1, &FixtureHook).unwrap();
        let (ok, _) = filter_valid(&w);
        assert!(ok);
        assert_eq!(w.id, "resource-allocation-1");
    }

    #[test]
    fn zero_count_is_an_error() {
        let t = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
        assert!(matches!(
            generate_dataset(&t, 0, 1),
            Err(Error::GenerationFailure(_))
        ));
    }

    #[test]
    fn dedup_keeps_first_of_identical_pair() {
        let t = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
        let w = instantiate(&t, 5).unwrap();
        let out = dedup(&[w.clone(), w.clone()]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn renamed_variables_survive_dedup() {
        let t = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
        let a = instantiate(&t, 5).unwrap();
        let mut b = a.clone();
        // rename every variable; names are part of instance identity
        let rename = |s: &str| format!("{s}_renamed");
        for v in b.formulation.variables.iter_mut() {
            v.name = rename(&v.name);
        }
        b.formulation.constraints = b
            .formulation
            .constraints
            .iter()
            .map(|c| LinearConstraint {
                coeffs: c.coeffs.iter().map(|(k, v)| (rename(k), *v)).collect(),
                cmp: c.cmp,
                rhs: c.rhs,
            })
            .collect();
        b.formulation.objective.coeffs = b
            .formulation
            .objective
            .coeffs
            .iter()
            .map(|(k, v)| (rename(k), *v))
            .collect();
        b.solution = b.solution.iter().map(|(k, v)| (rename(k), *v)).collect();
        let out = dedup(&[a, b]);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn pump_easy_template_generates() {
        let t = TemplateSpec::new(Family::PumpNetwork, Difficulty::Easy);
        let w = instantiate(&t, 2).unwrap();
        let rep = validate_descriptor(&w);
        assert!(rep.feasible, "{:?}", rep.messages);
        assert!(rep.complexity_pass);
        assert_eq!(w.formulation.category, Category::Pump);
    }

    #[test]
    fn pump_hard_template_generates_multi_type_instances() {
        let t = TemplateSpec::new(Family::PumpNetwork, Difficulty::Hard);
        let w = instantiate(&t, 4).unwrap();
        let rep = validate_descriptor(&w);
        assert!(rep.feasible, "{:?}", rep.messages);
        assert!(rep.complexity_pass, "{:?}", rep.messages);
        let inst = w.formulation.pump.as_ref().unwrap();
        assert!(inst.types.len() >= 4);
        assert_eq!(w.difficulty, Difficulty::Hard);
    }

    #[test]
    fn milp_family_diversity_across_seeds() {
        for family in Family::all_milp() {
            let t = TemplateSpec::new(family, Difficulty::Easy);
            let mut var_counts = std::collections::BTreeSet::new();
            let mut con_counts = std::collections::BTreeSet::new();
            for seed in 0..20 {
                if let Ok(w) = instantiate(&t, seed) {
                    var_counts.insert(w.formulation.variables.len());
                    con_counts.insert(w.formulation.constraints.len());
                }
                if var_counts.len() >= 2 && con_counts.len() >= 2 {
                    break;
                }
            }
            assert!(
                var_counts.len() >= 2,
                "{family:?} variable counts lack diversity: {var_counts:?}"
            );
            assert!(
                con_counts.len() >= 2,
                "{family:?} constraint counts lack diversity: {con_counts:?}"
            );
        }
    }
}
