//! Verifiable-reward substrate for optimization autoformalization.
//!
//! The crate synthesizes linear, mixed-integer, and pump-network optimization
//! problems whose ground-truth solutions are produced by embedded solvers,
//! renders natural-language descriptions of those problems and verifies them
//! component-wise, scores candidate formulations by executing them against
//! the ground truth, and provides the group-relative RL arithmetic (advantage
//! normalization, clipped surrogate, solvability gating, two-turn credit
//! assignment) needed to drive a policy trainer on top of it.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability (dataset generation, solving, description verification,
//! reward scoring, curriculum gating, clarification episodes, the HTTP
//! service). The `optiforge` binary exposes the same capabilities as batch
//! subcommands over JSONL files.

pub mod curriculum;
pub mod describe;
pub mod fixtures;
pub mod harness;
pub mod instancer;
pub mod multiturn;
pub mod problem;
pub mod pump;
pub mod reward;
pub mod rl;
pub mod solver;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Absolute feasibility tolerance applied to normalized constraint residuals.
pub const FEAS_TOL: f64 = 1e-6;

/// Tolerance for treating a value as integral.
pub const INT_TOL: f64 = 1e-6;

/// Round to two decimal places, the precision used for solution matching
/// and deduplication.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
