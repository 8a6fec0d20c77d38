//! Solve the six-type pump network instance end to end and print the
//! configuration table, then re-solve restricted to a chosen pattern.
//!
//!     cargo run --release --example solve_pump_network

use optiforge::fixtures;
use optiforge::solver::{solve_pump, solve_pump_continuous, ActivePattern};

fn main() -> optiforge::Result<()> {
    let inst = fixtures::pump_reference_instance();
    let (config, cost) = solve_pump(&inst)?;
    println!("full enumeration:\n{}", config.render_table(cost));

    // restricting the search to a fixed discrete pattern answers
    // "what is the best this particular arrangement can do?"
    let pattern: Vec<ActivePattern> = [0usize, 1, 2, 3, 5]
        .iter()
        .map(|&type_index| ActivePattern {
            type_index,
            series: 2,
            parallel: 1,
        })
        .collect();
    let restricted = solve_pump_continuous(&inst, &pattern)?;
    println!(
        "five-type pattern (all 2 series x 1 parallel): cost {:.2}",
        restricted.cost
    );
    for a in &restricted.allocations {
        println!(
            "  type {}: flow {:.2}, speed {:.0} RPM, power {:.2}",
            a.type_index,
            a.flow,
            a.speed_ratio * inst.omega_max,
            a.power
        );
    }
    Ok(())
}
