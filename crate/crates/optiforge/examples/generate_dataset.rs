//! Generate a batch of solver-verified problem instances and inspect the
//! acceptance bookkeeping.
//!
//!     cargo run --example generate_dataset

use optiforge::instancer::{generate_dataset, Family, TemplateSpec};
use optiforge::problem::Difficulty;

fn main() -> optiforge::Result<()> {
    for family in [
        Family::ResourceAllocation,
        Family::Knapsack,
        Family::Scheduling,
    ] {
        let template = TemplateSpec::new(family, Difficulty::Easy);
        let (descriptors, report) = generate_dataset(&template, 5, 7)?;
        println!(
            "{:<22} accepted {} of {} attempts (trivial {}, infeasible {}, duplicate {})",
            family.slug(),
            report.accepted,
            report.attempts(),
            report.rejected_trivial,
            report.rejected_infeasible,
            report.rejected_duplicate,
        );
        let w = &descriptors[0];
        println!(
            "  first instance: {} vars, {} constraints, optimum {:.2}",
            w.formulation.variables.len(),
            w.formulation.constraints.len(),
            w.objective_value
        );
    }
    Ok(())
}
