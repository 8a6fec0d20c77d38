//! Composite verifiable reward: execution, feasibility, and optimality
//! components gated in sequence, with category-specific matching rules, plus
//! the two-turn reward pair for the clarification setting.
//!
//! Execution means the candidate parses and dispatches through the embedded
//! solvers (or, for solution bundles, covers every variable); no external
//! code is ever run. Feasibility and optimality are judged against the
//! ground-truth world descriptor, never against the candidate's own claims.

use serde::{Deserialize, Serialize};

use crate::describe::{oracle_answer, OmissionLedger};
use crate::multiturn::{extract_tagged_query, Trajectory};
use crate::problem::{Assignment, Category, FormulationIR, Solution, SolveStatus, WorldDescriptor};
use crate::pump::PumpConfig;
use crate::{round2, solver, Error, Result};

/// Reward weights and tolerances. Defaults follow the standard component
/// table: 0.1 execution, 0.1 feasibility, 1.0 optimality, 0.2 for a
/// well-formed productive clarification query; pump matching uses a 2%
/// relative cost tolerance and a 5% per-pump power band for the bonus flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardConfig {
    pub weight_exec: f64,
    pub weight_feas: f64,
    pub weight_opt: f64,
    pub weight_query: f64,
    pub pump_cost_rel_tol: f64,
    pub pump_power_rel_tol: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            weight_exec: 0.1,
            weight_feas: 0.1,
            weight_opt: 1.0,
            weight_query: 0.2,
            pump_cost_rel_tol: 0.02,
            pump_power_rel_tol: 0.05,
        }
    }
}

impl RewardConfig {
    /// Weights must satisfy exec <= feas < opt.
    pub fn validate(&self) -> Result<()> {
        if !(self.weight_exec <= self.weight_feas && self.weight_feas < self.weight_opt) {
            return Err(Error::Config(format!(
                "reward weights must be ordered exec <= feas < opt, got {} / {} / {}",
                self.weight_exec, self.weight_feas, self.weight_opt
            )));
        }
        if self.pump_cost_rel_tol <= 0.0 || self.pump_power_rel_tol <= 0.0 {
            return Err(Error::Config("pump tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// A candidate formulation or claimed solution to be scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(flatten)]
    pub payload: CandidatePayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidatePayload {
    FormulationIr {
        ir: FormulationIR,
    },
    SolutionBundle {
        assignment: Assignment,
        claimed_objective: f64,
    },
}

impl Candidate {
    pub fn from_ir(ir: FormulationIR) -> Self {
        Candidate {
            payload: CandidatePayload::FormulationIr { ir },
            raw_text: None,
        }
    }

    pub fn from_bundle(assignment: Assignment, claimed_objective: f64) -> Self {
        Candidate {
            payload: CandidatePayload::SolutionBundle {
                assignment,
                claimed_objective,
            },
            raw_text: None,
        }
    }
}

/// Component-wise reward with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub r_exec: f64,
    pub r_feas: f64,
    pub r_opt: f64,
    pub total: f64,
    /// Pump only: every active per-pump power within the 5% band.
    pub power_bonus: bool,
    pub diagnostics: Vec<String>,
}

impl RewardBreakdown {
    fn zero() -> Self {
        RewardBreakdown {
            r_exec: 0.0,
            r_feas: 0.0,
            r_opt: 0.0,
            total: 0.0,
            power_bonus: false,
            diagnostics: Vec::new(),
        }
    }
}

fn round2_eq(a: f64, b: f64) -> bool {
    (round2(a) - round2(b)).abs() < 5e-9
}

/// A breakdown plus the objective the candidate itself reports: the solved
/// optimum for formulation candidates, the claimed value for bundles. This
/// is what majority-vote metrics tally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub breakdown: RewardBreakdown,
    pub reported_objective: Option<f64>,
}

/// Score a candidate against a world descriptor with default weights.
pub fn evaluate_candidate(cand: &Candidate, w: &WorldDescriptor) -> RewardBreakdown {
    evaluate_candidate_with(cand, w, &RewardConfig::default())
}

/// Score a candidate against a world descriptor.
pub fn evaluate_candidate_with(
    cand: &Candidate,
    w: &WorldDescriptor,
    cfg: &RewardConfig,
) -> RewardBreakdown {
    score_candidate(cand, w, cfg).breakdown
}

/// Full scoring pass: reward breakdown plus the candidate's own reported
/// objective value.
pub fn score_candidate(
    cand: &Candidate,
    w: &WorldDescriptor,
    cfg: &RewardConfig,
) -> ScoredCandidate {
    let mut out = RewardBreakdown::zero();

    // execution stage
    let (point, reported): (Assignment, Option<f64>) = match &cand.payload {
        CandidatePayload::FormulationIr { ir } => {
            if let Err(e) = ir.validate() {
                out.diagnostics.push(format!("execution: {e}"));
                return ScoredCandidate {
                    breakdown: out,
                    reported_objective: None,
                };
            }
            if ir.category != w.formulation.category {
                out.diagnostics.push(format!(
                    "execution: candidate category {} does not match problem category {}",
                    ir.category, w.formulation.category
                ));
                return ScoredCandidate {
                    breakdown: out,
                    reported_objective: None,
                };
            }
            let solution = match solver::solve(ir) {
                Ok(s) => s,
                Err(e) => {
                    out.diagnostics
                        .push(format!("execution: solve failed: {e}"));
                    return ScoredCandidate {
                        breakdown: out,
                        reported_objective: None,
                    };
                }
            };
            out.r_exec = cfg.weight_exec;
            out.diagnostics
                .push(format!("execution: solver returned {:?}", solution.status));
            if solution.status != SolveStatus::Optimal {
                out.total = out.r_exec;
                out.diagnostics
                    .push("feasibility: no optimal point to check".into());
                return ScoredCandidate {
                    breakdown: out,
                    reported_objective: None,
                };
            }
            (solution.assignment, Some(solution.objective))
        }
        CandidatePayload::SolutionBundle {
            assignment,
            claimed_objective,
        } => {
            let missing: Vec<&String> = w
                .formulation
                .variables
                .iter()
                .map(|v| &v.name)
                .filter(|n| !assignment.contains_key(*n))
                .collect();
            if let Some(first) = missing.first() {
                out.diagnostics
                    .push(format!("execution: assignment misses variable `{first}`"));
                return ScoredCandidate {
                    breakdown: out,
                    reported_objective: None,
                };
            }
            out.r_exec = cfg.weight_exec;
            out.diagnostics
                .push("execution: assignment covers all variables".into());
            (assignment.clone(), Some(*claimed_objective))
        }
    };

    // feasibility stage
    match crate::problem::is_feasible(&w.formulation, &point) {
        Ok(true) => {
            out.r_feas = cfg.weight_feas;
            out.diagnostics.push("feasibility: ok".into());
        }
        Ok(false) => {
            out.total = out.r_exec;
            out.diagnostics
                .push("feasibility: a constraint or bound is violated".into());
            return ScoredCandidate {
                breakdown: out,
                reported_objective: reported,
            };
        }
        Err(e) => {
            out.total = out.r_exec;
            out.diagnostics.push(format!("feasibility: {e}"));
            return ScoredCandidate {
                breakdown: out,
                reported_objective: reported,
            };
        }
    }

    // optimality stage
    let (matched, bonus, detail) = match_rule(&point, w, cfg);
    out.power_bonus = bonus;
    out.diagnostics.push(detail);
    if matched {
        out.r_opt = cfg.weight_opt;
    }
    out.total = out.r_exec + out.r_feas + out.r_opt;
    ScoredCandidate {
        breakdown: out,
        reported_objective: reported,
    }
}

/// Category-specific ground-truth matching at a feasible point.
fn match_rule(point: &Assignment, w: &WorldDescriptor, cfg: &RewardConfig) -> (bool, bool, String) {
    let achieved = match crate::problem::evaluate_objective(&w.formulation, point) {
        Ok(v) => v,
        Err(e) => return (false, false, format!("optimality: {e}")),
    };
    match w.formulation.category {
        Category::Lp => {
            if !round2_eq(achieved, w.objective_value) {
                return (
                    false,
                    false,
                    format!(
                        "optimality: objective {achieved} does not match {} at 2 decimals",
                        w.objective_value
                    ),
                );
            }
            for (name, truth) in &w.solution {
                let got = point.get(name).copied().unwrap_or(f64::NAN);
                if !round2_eq(got, *truth) {
                    return (
                        false,
                        false,
                        format!("optimality: variable {name} is {got}, expected {truth}"),
                    );
                }
            }
            (
                true,
                false,
                "optimality: objective and variables match".into(),
            )
        }
        Category::Milp => {
            if round2_eq(achieved, w.objective_value) {
                (true, false, "optimality: objective matches".into())
            } else {
                (
                    false,
                    false,
                    format!(
                        "optimality: objective {achieved} does not match {} at 2 decimals",
                        w.objective_value
                    ),
                )
            }
        }
        Category::Pump => {
            let inst = match &w.formulation.pump {
                Some(i) => i,
                None => return (false, false, "optimality: pump data missing".into()),
            };
            let cand_cfg = match PumpConfig::from_assignment(inst, point) {
                Ok(c) => c,
                Err(e) => return (false, false, format!("optimality: {e}")),
            };
            let truth_cfg = match PumpConfig::from_assignment(inst, &w.solution) {
                Ok(c) => c,
                Err(e) => return (false, false, format!("optimality: ground truth: {e}")),
            };
            let denom = w.objective_value.abs().max(1e-12);
            let cost_ok = (achieved - w.objective_value).abs() / denom <= cfg.pump_cost_rel_tol;
            let pattern_ok = cand_cfg.active_set() == truth_cfg.active_set();
            let mut bonus = pattern_ok;
            if pattern_ok {
                for (c, t) in cand_cfg.types.iter().zip(truth_cfg.types.iter()) {
                    if t.active {
                        let p_denom = t.power.abs().max(1e-12);
                        if (c.power - t.power).abs() / p_denom > cfg.pump_power_rel_tol {
                            bonus = false;
                            break;
                        }
                    }
                }
            } else {
                bonus = false;
            }
            let detail = format!(
                "optimality: cost {} vs {} ({}), active set {:?} vs {:?}",
                achieved,
                w.objective_value,
                if cost_ok { "within 2%" } else { "outside 2%" },
                cand_cfg.active_set(),
                truth_cfg.active_set()
            );
            (cost_ok && pattern_ok, bonus, detail)
        }
    }
}

/// Pure optimality predicate over a solved candidate, reusing the same
/// category rules as [`evaluate_candidate`]. Expects an optimal-status
/// solution.
pub fn check_optimality(solution: &Solution, w: &WorldDescriptor) -> bool {
    check_optimality_with(solution, w, &RewardConfig::default())
}

pub fn check_optimality_with(solution: &Solution, w: &WorldDescriptor, cfg: &RewardConfig) -> bool {
    match_rule(&solution.assignment, w, cfg).0
}

/// Two-turn reward pair: the intermediate component pays out only when the
/// first-turn query is well-tagged and actually hits a ledgered omission;
/// the outcome component is the full composite reward of the final
/// candidate.
pub fn multi_turn_reward(
    traj: &Trajectory,
    w: &WorldDescriptor,
    ledger: &OmissionLedger,
) -> Result<(f64, f64)> {
    multi_turn_reward_with(traj, w, ledger, &RewardConfig::default())
}

pub fn multi_turn_reward_with(
    traj: &Trajectory,
    w: &WorldDescriptor,
    ledger: &OmissionLedger,
    cfg: &RewardConfig,
) -> Result<(f64, f64)> {
    let candidate = traj
        .candidate
        .as_ref()
        .ok_or_else(|| Error::MalformedTrajectory("missing terminal candidate".into()))?;
    let r_intermediate = match extract_tagged_query(&traj.query) {
        Some(inner) if oracle_answer(inner, w, ledger).matched.is_some() => cfg.weight_query,
        _ => 0.0,
    };
    let r_outcome = evaluate_candidate_with(candidate, w, cfg).total;
    Ok((r_intermediate, r_outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ground_truth_ir_scores_full_reward() {
        for w in [fixtures::farming_lp(), fixtures::warehouse_milp()] {
            let cand = Candidate::from_ir(w.formulation.clone());
            let r = evaluate_candidate(&cand, &w);
            assert_eq!(r.total, 1.2, "{}: {:?}", w.id, r.diagnostics);
            assert_eq!(r.r_exec, 0.1);
            assert_eq!(r.r_feas, 0.1);
            assert_eq!(r.r_opt, 1.0);
        }
    }

    #[test]
    fn pump_ground_truth_ir_scores_full_reward_with_bonus() {
        let w = fixtures::pump_reference();
        let r = evaluate_candidate(&Candidate::from_ir(w.formulation.clone()), &w);
        assert_eq!(r.total, 1.2, "{:?}", r.diagnostics);
        assert!(r.power_bonus);
    }

    #[test]
    fn feasible_suboptimal_bundle_scores_partial() {
        let w = fixtures::farming_lp();
        // the origin is feasible but far from optimal
        let assignment: Assignment = w
            .formulation
            .variables
            .iter()
            .map(|v| (v.name.clone(), 0.0))
            .collect();
        let r = evaluate_candidate(&Candidate::from_bundle(assignment, 0.0), &w);
        assert_eq!(r.total, 0.2, "{:?}", r.diagnostics);
        assert_eq!(r.r_opt, 0.0);
    }

    #[test]
    fn malformed_ir_scores_zero() {
        let w = fixtures::farming_lp();
        let mut ir = w.formulation.clone();
        ir.constraints.push(crate::problem::LinearConstraint::new(
            &[("ghost_variable", 1.0)],
            crate::problem::Comparator::Le,
            1.0,
        ));
        let r = evaluate_candidate(&Candidate::from_ir(ir), &w);
        assert_eq!(r.total, 0.0);
        assert_eq!(r.r_exec, 0.0);
    }

    #[test]
    fn perturbed_lp_variable_drops_optimality_only() {
        let w = fixtures::farming_lp();
        // nudge one ground-truth variable down; stays feasible, not optimal
        let mut assignment = w.solution.clone();
        let v = assignment.get_mut("x_cattle_units").unwrap();
        *v -= 1.0;
        let claimed = crate::problem::evaluate_objective(&w.formulation, &assignment).unwrap();
        let r = evaluate_candidate(&Candidate::from_bundle(assignment, claimed), &w);
        assert_eq!(r.r_exec, 0.1);
        assert_eq!(r.r_feas, 0.1, "{:?}", r.diagnostics);
        assert_eq!(r.r_opt, 0.0);
    }

    #[test]
    fn milp_matches_on_objective_alone() {
        // an optimal assignment from the solver must earn r_opt even if it
        // differs from the stored one
        let w = fixtures::warehouse_milp();
        let s = crate::solver::solve_milp(&w.formulation).unwrap();
        let r = evaluate_candidate(
            &Candidate::from_bundle(s.assignment.clone(), s.objective),
            &w,
        );
        assert_eq!(r.total, 1.2, "{:?}", r.diagnostics);
    }

    #[test]
    fn weight_order_is_enforced() {
        let cfg = RewardConfig {
            weight_feas: 2.0,
            ..RewardConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(RewardConfig::default().validate().is_ok());
    }

    #[test]
    fn pump_cost_band_is_two_percent() {
        let w = fixtures::pump_reference();
        let cfg = RewardConfig::default();
        let denom = w.objective_value.abs();
        for (scale, expect) in [(1.019, true), (1.021, false)] {
            let cost = w.objective_value * scale;
            let ok = (cost - w.objective_value).abs() / denom <= cfg.pump_cost_rel_tol;
            assert_eq!(ok, expect);
        }
    }

    #[test]
    fn trajectory_without_candidate_is_malformed() {
        let w = fixtures::farming_lp();
        let d = crate::describe::render_description(&w, 0).unwrap();
        let traj = crate::multiturn::Trajectory {
            incomplete: d,
            query: String::new(),
            oracle_reply: String::new(),
            candidate: None,
            r_intermediate: 0.0,
            r_outcome: 0.0,
            terminal: false,
        };
        let err = multi_turn_reward(&traj, &w, &Default::default()).unwrap_err();
        assert!(matches!(err, crate::Error::MalformedTrajectory(_)));
    }

    #[test]
    fn idempotent_evaluation() {
        let w = fixtures::farming_lp();
        let cand = Candidate::from_ir(w.formulation.clone());
        let a = evaluate_candidate(&cand, &w);
        let b = evaluate_candidate(&cand, &w);
        assert_eq!(a, b);
    }
}
