//! Walk the three-phase curriculum with scripted policies: a perfect oracle
//! marches to the terminal phase, a failing policy stays gated at phase 1.
//!
//!     cargo run --example curriculum_phases

use optiforge::curriculum::{
    advance, estimate_solvability, PhaseState, ScriptedFail, ScriptedOracle, DEFAULT_GROUP,
    DEFAULT_TAU,
};
use optiforge::instancer::{generate_dataset, Family, TemplateSpec};
use optiforge::problem::Difficulty;

fn main() -> optiforge::Result<()> {
    let easy_template = TemplateSpec::new(Family::Knapsack, Difficulty::Easy);
    let (easy, _) = generate_dataset(&easy_template, 8, 1)?;
    let hard: Vec<_> = easy
        .iter()
        .cloned()
        .map(|mut w| {
            w.difficulty = Difficulty::Hard;
            w.id = format!("{}-hard", w.id);
            w
        })
        .collect();

    let oracle = ScriptedOracle { success_rate: 0.9 };
    println!(
        "solvability of the oracle policy on the easy pool: {:.2}",
        estimate_solvability(&oracle, &easy, DEFAULT_GROUP, 5)
    );

    let mut state = PhaseState::start(DEFAULT_TAU, DEFAULT_GROUP);
    loop {
        let out = advance(&oracle, &state, &easy, &hard, 5)?;
        println!(
            "phase {} -> {} (S = {:.2}, advanced = {})",
            state.phase, out.state.phase, out.solvability, out.advanced
        );
        state = out.state;
        if !state.is_terminal() && out.advanced {
            continue;
        }
        break;
    }

    let stuck = advance(
        &ScriptedFail,
        &PhaseState::start(DEFAULT_TAU, 4),
        &easy,
        &hard,
        5,
    )?;
    println!(
        "failing policy: S = {:.2}, advanced = {} (cold start: no reward, no signal)",
        stuck.solvability, stuck.advanced
    );
    Ok(())
}
