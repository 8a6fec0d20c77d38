//! Batch front doors: JSONL file handling, evaluation metrics, the
//! key-value config file, the HTTP scoring service, and the implementations
//! behind the command-line subcommands.

mod commands;
mod config;
mod eval;
mod jsonl;
mod service;

pub use commands::{
    run_curriculum, run_eval, run_generate, run_reward, run_solve, run_verify, GenerateArgs,
    SolveRecord,
};
pub use config::HarnessConfig;
pub use eval::{evaluate, CandidateSet, CategoryMetrics, EvalMode, EvalRecord, MetricsReport};
pub use jsonl::{read_jsonl, write_jsonl};
pub use service::{serve, ServiceHandle, EPISODE_TTL};
