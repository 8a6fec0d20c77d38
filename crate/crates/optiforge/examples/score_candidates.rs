//! Score candidate formulations against ground truth: the composite reward
//! pays 0.1 for executing, 0.1 for a feasible solution, and 1.0 for
//! matching the optimum.
//!
//!     cargo run --example score_candidates

use optiforge::fixtures;
use optiforge::reward::{evaluate_candidate, Candidate};

fn main() {
    let w = fixtures::warehouse_milp();

    let truth = Candidate::from_ir(w.formulation.clone());
    let feasible_origin = Candidate::from_bundle(
        w.formulation
            .variables
            .iter()
            .map(|v| (v.name.clone(), 0.0))
            .collect(),
        0.0,
    );
    let mut broken = w.formulation.clone();
    broken
        .constraints
        .push(optiforge::problem::LinearConstraint::new(
            &[("mystery_var", 1.0)],
            optiforge::problem::Comparator::Le,
            1.0,
        ));
    let malformed = Candidate::from_ir(broken);

    for (label, candidate) in [
        ("ground-truth formulation", truth),
        ("feasible but idle plan", feasible_origin),
        ("undeclared-variable formulation", malformed),
    ] {
        let r = evaluate_candidate(&candidate, &w);
        println!(
            "{label:<32} exec {:.1}  feas {:.1}  opt {:.1}  total {:.1}",
            r.r_exec, r.r_feas, r.r_opt, r.total
        );
        for d in &r.diagnostics {
            println!("    {d}");
        }
    }
}
