//! Embedded desk-scale solvers: primal simplex for linear programs,
//! branch-and-bound for mixed-integer programs, and pattern enumeration with
//! continuous refinement for pump networks.

mod branch_bound;
mod pump_search;
mod simplex;

pub use branch_bound::{solve_milp, NODE_LIMIT};
pub use pump_search::{
    config_from_solve, solve_pump, solve_pump_continuous, ActivePattern, ContinuousSolve,
    TypeAllocation, PATTERN_BUDGET, REFINE_TOL,
};
pub use simplex::solve_lp;

use crate::problem::{Category, FormulationIR, Solution, SolveStatus};
use crate::{Error, Result};

/// Solve any formulation by dispatching on its category. Pump results are
/// flattened into the `z_i, num_s_i, num_p_i, w_i, vdot_i, dp_i, P_i, x_i`
/// assignment naming scheme.
pub fn solve(ir: &FormulationIR) -> Result<Solution> {
    ir.validate()?;
    match ir.category {
        Category::Lp => solve_lp(ir),
        Category::Milp => solve_milp(ir),
        Category::Pump => {
            let inst = ir
                .pump
                .as_ref()
                .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;
            match solve_pump(inst) {
                Ok((config, cost)) => Ok(Solution {
                    status: SolveStatus::Optimal,
                    assignment: config.to_assignment(),
                    objective: cost,
                    diagnostics: config.render_table(cost),
                }),
                Err(Error::InfeasibleFlow(d)) => Ok(Solution::infeasible(&d)),
                Err(Error::InfeasiblePressure { .. }) => Ok(Solution::infeasible(
                    "no type can deliver the pressure rise",
                )),
                Err(e) => Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dispatch_matches_direct_solvers() {
        let lp = fixtures::farming_lp();
        let a = solve(&lp.formulation).unwrap();
        let b = solve_lp(&lp.formulation).unwrap();
        assert_eq!(a, b);

        let milp = fixtures::warehouse_milp();
        let a = solve(&milp.formulation).unwrap();
        let b = solve_milp(&milp.formulation).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dispatch_flattens_pump_solutions() {
        let w = fixtures::pump_reference();
        let s = solve(&w.formulation).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.assignment, w.solution);
        assert!(s.diagnostics.contains("Pump"));
    }
}
