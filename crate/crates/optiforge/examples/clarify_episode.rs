//! A two-turn clarification episode: the environment withholds part of the
//! problem, the agent asks one targeted query, then commits a formulation.
//!
//!     cargo run --example clarify_episode

use optiforge::fixtures;
use optiforge::multiturn::{reset, QUERY_TAG_CLOSE, QUERY_TAG_OPEN};
use optiforge::reward::Candidate;

fn main() -> optiforge::Result<()> {
    let w = fixtures::farming_lp();
    let (mut episode, incomplete) = reset(&w, 2, 11)?;
    println!("--- incomplete description ---\n{}\n", incomplete.text);

    let query = format!(
        "{QUERY_TAG_OPEN} what is the limit on the water availability constraint, and what \
         is the cost per unit? {QUERY_TAG_CLOSE}"
    );
    let answer = episode.step_query(&query)?;
    println!("oracle: {answer}\n");

    let (r_intermediate, r_outcome, trajectory) =
        episode.step_commit(Candidate::from_ir(w.formulation.clone()))?;
    println!(
        "rewards: intermediate {r_intermediate}, outcome {r_outcome} (terminal = {})",
        trajectory.terminal
    );
    Ok(())
}
