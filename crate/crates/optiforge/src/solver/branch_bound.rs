//! Branch-and-bound over LP relaxations for mixed-integer programs.
//!
//! Depth-first search branching on the most-fractional variable, pruning
//! against the incumbent. The default node budget is 100_000; exceeding it
//! reports an iteration-limit status rather than a wrong answer.

use std::collections::BTreeMap;

use crate::problem::{Category, FormulationIR, Solution, SolveStatus};
use crate::{Error, Result, INT_TOL};

use super::simplex::{self, LpOutcome};

/// Default node budget.
pub const NODE_LIMIT: usize = 100_000;

/// Solve a mixed-integer program to global optimality.
pub fn solve_milp(ir: &FormulationIR) -> Result<Solution> {
    ir.validate()?;
    if ir.category != Category::Milp {
        return Err(Error::CategoryMismatch {
            expected: "milp".into(),
            found: ir.category.to_string(),
        });
    }
    solve_with_limit(ir, NODE_LIMIT)
}

pub(crate) fn solve_with_limit(ir: &FormulationIR, node_limit: usize) -> Result<Solution> {
    let integral: Vec<String> = ir
        .variables
        .iter()
        .filter(|v| v.domain.is_integral())
        .map(|v| v.name.clone())
        .collect();

    type Bounds = BTreeMap<String, (f64, Option<f64>)>;
    let root: Bounds = ir
        .variables
        .iter()
        .map(|v| {
            let (lo, up) = match v.domain {
                crate::problem::VarDomain::Binary => (
                    v.lower.max(0.0).ceil(),
                    Some(v.upper.unwrap_or(1.0).min(1.0).floor()),
                ),
                crate::problem::VarDomain::Integer => (v.lower.ceil(), v.upper.map(|u| u.floor())),
                crate::problem::VarDomain::Continuous => (v.lower, v.upper),
            };
            (v.name.clone(), (lo, up))
        })
        .collect();

    let mut stack = vec![root];
    let mut nodes = 0usize;
    let mut incumbent: Option<(f64, crate::problem::Assignment)> = None; // internal min value
    let sign = match ir.objective.sense {
        crate::problem::Sense::Min => 1.0,
        crate::problem::Sense::Max => -1.0,
    };

    while let Some(bounds) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            return Ok(Solution {
                status: SolveStatus::IterationLimit,
                assignment: crate::problem::Assignment::new(),
                objective: f64::NAN,
                diagnostics: format!("branch-and-bound: node limit {node_limit} exceeded"),
            });
        }
        let (outcome, _) = simplex::solve_relaxation(ir, Some(&bounds))?;
        let x = match outcome {
            LpOutcome::Optimal(x) => x,
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                if nodes == 1 {
                    return Ok(Solution::unbounded(
                        "branch-and-bound: root relaxation unbounded",
                    ));
                }
                continue;
            }
            LpOutcome::IterationLimit => {
                return Ok(Solution {
                    status: SolveStatus::IterationLimit,
                    assignment: crate::problem::Assignment::new(),
                    objective: f64::NAN,
                    diagnostics: "branch-and-bound: relaxation hit the pivot cap".into(),
                })
            }
        };
        let point: crate::problem::Assignment = ir
            .variables
            .iter()
            .map(|v| v.name.clone())
            .zip(x.iter().copied())
            .collect();
        let raw = crate::problem::evaluate_objective(ir, &point)?;
        let value = sign * raw;
        if let Some((best, _)) = &incumbent {
            if value >= *best - 1e-9 {
                continue; // bound cannot improve the incumbent
            }
        }

        // most-fractional branching variable
        let mut branch: Option<(f64, &str, f64)> = None; // score, name, value
        for name in &integral {
            let v = point[name];
            let frac = v - v.floor();
            let dist = frac.min(1.0 - frac);
            if dist > INT_TOL {
                let better = match &branch {
                    None => true,
                    Some((score, _, _)) => dist > *score + 1e-12,
                };
                if better {
                    branch = Some((dist, name, v));
                }
            }
        }

        match branch {
            None => {
                // integral solution: snap and record
                let mut snapped = point.clone();
                for name in &integral {
                    let v = snapped[name];
                    snapped.insert(name.clone(), v.round());
                }
                let raw = crate::problem::evaluate_objective(ir, &snapped)?;
                let value = sign * raw;
                let better = match &incumbent {
                    None => true,
                    Some((best, _)) => value < *best - 1e-9,
                };
                if better {
                    incumbent = Some((value, snapped));
                }
            }
            Some((_, name, v)) => {
                let (lo, up) = bounds[name];
                let floor = v.floor();
                let mut down = bounds.clone();
                down.insert(
                    name.to_string(),
                    (lo, Some(up.map_or(floor, |u| u.min(floor)))),
                );
                let mut upn = bounds.clone();
                upn.insert(name.to_string(), (lo.max(floor + 1.0), up));
                // explore the side nearer the fractional value first
                if v - floor >= 0.5 {
                    stack.push(down);
                    stack.push(upn);
                } else {
                    stack.push(upn);
                    stack.push(down);
                }
            }
        }
    }

    match incumbent {
        Some((_, assignment)) => {
            let objective = crate::problem::evaluate_objective(ir, &assignment)?;
            Ok(Solution {
                status: SolveStatus::Optimal,
                assignment,
                objective,
                diagnostics: format!("branch-and-bound: {nodes} nodes"),
            })
        }
        None => Ok(Solution::infeasible(
            "branch-and-bound: no integer-feasible point",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Comparator, LinearConstraint, Objective, Sense, Variable};

    fn knapsack() -> FormulationIR {
        FormulationIR {
            variables: vec![
                Variable::binary("a"),
                Variable::binary("b"),
                Variable::binary("c"),
            ],
            constraints: vec![LinearConstraint::new(
                &[("a", 10.0), ("b", 20.0), ("c", 30.0)],
                Comparator::Le,
                50.0,
            )],
            objective: Objective::new(Sense::Max, &[("a", 60.0), ("b", 100.0), ("c", 120.0)], 0.0),
            category: Category::Milp,
            pump: None,
        }
    }

    #[test]
    fn knapsack_matches_enumeration() {
        // exhaustive oracle over the 8 binary points
        let values = [60.0, 100.0, 120.0];
        let weights = [10.0, 20.0, 30.0];
        let mut best = f64::NEG_INFINITY;
        let mut best_pt = [0.0; 3];
        for mask in 0..8u32 {
            let pick: Vec<f64> = (0..3).map(|j| ((mask >> j) & 1) as f64).collect();
            let w: f64 = pick.iter().zip(weights.iter()).map(|(p, w)| p * w).sum();
            if w <= 50.0 {
                let v: f64 = pick.iter().zip(values.iter()).map(|(p, v)| p * v).sum();
                if v > best {
                    best = v;
                    best_pt = [pick[0], pick[1], pick[2]];
                }
            }
        }
        assert_eq!(best, 220.0);
        assert_eq!(best_pt, [0.0, 1.0, 1.0]);

        let s = solve_milp(&knapsack()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - best).abs() < 1e-9);
        assert_eq!(s.assignment["a"], 0.0);
        assert_eq!(s.assignment["b"], 1.0);
        assert_eq!(s.assignment["c"], 1.0);
    }

    #[test]
    fn integral_relaxation_needs_no_branching() {
        // 2x2 assignment: totally unimodular, LP relaxation is integral
        let ir = FormulationIR {
            variables: vec![
                Variable::binary("x11"),
                Variable::binary("x12"),
                Variable::binary("x21"),
                Variable::binary("x22"),
            ],
            constraints: vec![
                LinearConstraint::new(&[("x11", 1.0), ("x12", 1.0)], Comparator::Eq, 1.0),
                LinearConstraint::new(&[("x21", 1.0), ("x22", 1.0)], Comparator::Eq, 1.0),
                LinearConstraint::new(&[("x11", 1.0), ("x21", 1.0)], Comparator::Eq, 1.0),
                LinearConstraint::new(&[("x12", 1.0), ("x22", 1.0)], Comparator::Eq, 1.0),
            ],
            objective: Objective::new(
                Sense::Min,
                &[("x11", 4.0), ("x12", 1.0), ("x21", 2.0), ("x22", 6.0)],
                0.0,
            ),
            category: Category::Milp,
            pump: None,
        };
        let s = solve_milp(&ir).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        // relaxation optimum equals the integer optimum
        let relaxed = {
            let mut r = ir.clone();
            for v in r.variables.iter_mut() {
                v.domain = crate::problem::VarDomain::Continuous;
            }
            r.category = Category::Lp;
            crate::solver::solve_lp(&r).unwrap()
        };
        assert!((s.objective - relaxed.objective).abs() < 1e-9);
        assert!((s.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_integer_program() {
        let ir = FormulationIR {
            variables: vec![Variable::integer("n", 0.0, Some(10.0))],
            constraints: vec![
                LinearConstraint::new(&[("n", 2.0)], Comparator::Ge, 3.0),
                LinearConstraint::new(&[("n", 2.0)], Comparator::Le, 3.5),
            ],
            objective: Objective::new(Sense::Min, &[("n", 1.0)], 0.0),
            category: Category::Milp,
            pump: None,
        };
        let s = solve_milp(&ir).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
    }

    #[test]
    fn mixed_integer_continuous() {
        // min 3y + x  s.t.  x + y >= 2.5, x <= 1.2 cont, y integer
        let ir = FormulationIR {
            variables: vec![
                Variable::continuous("x", 0.0, Some(1.2)),
                Variable::integer("y", 0.0, Some(5.0)),
            ],
            constraints: vec![LinearConstraint::new(
                &[("x", 1.0), ("y", 1.0)],
                Comparator::Ge,
                2.5,
            )],
            objective: Objective::new(Sense::Min, &[("x", 1.0), ("y", 3.0)], 0.0),
            category: Category::Milp,
            pump: None,
        };
        let s = solve_milp(&ir).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.assignment["y"], 2.0);
        assert!((s.assignment["x"] - 0.5).abs() < 1e-9);
        assert!((s.objective - 6.5).abs() < 1e-9);
    }
}
