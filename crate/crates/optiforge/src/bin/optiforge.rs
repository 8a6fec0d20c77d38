//! Batch CLI over the library: dataset generation, solving, description
//! verification, reward scoring, evaluation metrics, curriculum runs, and
//! the HTTP scoring service.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use optiforge::harness::{self, EvalMode, GenerateArgs, HarnessConfig};
use optiforge::instancer::Family;
use optiforge::problem::{Category, Difficulty};

#[derive(Parser)]
#[command(
    name = "optiforge",
    version,
    about = "Optimization problem forge: generate, solve, verify, score"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Generate a dataset of solver-verified problem instances
    Generate {
        #[arg(long, value_parser = parse_category)]
        category: Category,
        /// Problem family (defaults to a representative family per category)
        #[arg(long, value_parser = clap::builder::ValueParser::new(parse_family))]
        family: Option<Family>,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "easy", value_parser = parse_difficulty)]
        difficulty: Difficulty,
        #[arg(long)]
        out: PathBuf,
        /// Sidecar report path (defaults to <out>.report.json)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Solve world descriptors or bare formulations from JSONL
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render and verify descriptions for a dataset
    Verify {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score candidate samples against ground truth
    Reward {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute pass@1, pass@k, and sc@k metrics
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "summary")]
        mode: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the three-phase curriculum schedule with a scripted policy
    Curriculum {
        /// fail | oracle:<p> | replay:<path> | easy-only | external
        #[arg(long)]
        policy: String,
        #[arg(long)]
        easy: PathBuf,
        #[arg(long)]
        hard: PathBuf,
        #[arg(long, default_value_t = optiforge::curriculum::DEFAULT_TAU)]
        tau: f64,
        #[arg(long, default_value_t = optiforge::curriculum::DEFAULT_GROUP)]
        group: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve rewards, problems, and clarification episodes over HTTP
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn parse_category(s: &str) -> Result<Category, String> {
    match s {
        "lp" => Ok(Category::Lp),
        "milp" => Ok(Category::Milp),
        "pump" => Ok(Category::Pump),
        other => Err(format!("unknown category `{other}` (lp|milp|pump)")),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_difficulty(s: &str) -> Result<Difficulty, String> {
    match s {
        "easy" => Ok(Difficulty::Easy),
        "hard" => Ok(Difficulty::Hard),
        other => Err(format!("unknown difficulty `{other}` (easy|hard)")),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<HarnessConfig> {
    Ok(match path {
        Some(p) => HarnessConfig::load(p)?,
        None => HarnessConfig::default(),
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Commands::Generate {
            category,
            family,
            count,
            seed,
            difficulty,
            out,
            report,
        } => {
            let report = harness::run_generate(&GenerateArgs {
                category,
                family,
                count,
                seed,
                difficulty,
                out,
                report,
            })?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Commands::Solve { input, out } => {
            let records = harness::run_solve(&input, out.as_deref())?;
            if out.is_none() {
                for r in &records {
                    println!("{}", serde_json::to_string(r)?);
                }
            }
        }
        Commands::Verify { dataset, out } => {
            let records = harness::run_verify(&dataset, out.as_deref())?;
            if out.is_none() {
                for r in &records {
                    println!("{}", serde_json::to_string(r)?);
                }
            }
        }
        Commands::Reward {
            dataset,
            candidates,
            config,
            out,
        } => {
            let cfg = load_config(&config)?;
            let records = harness::run_reward(&dataset, &candidates, &cfg, out.as_deref())?;
            if out.is_none() {
                for r in &records {
                    println!("{}", serde_json::to_string(r)?);
                }
            }
        }
        Commands::Eval {
            dataset,
            candidates,
            k,
            mode,
            config,
            out,
        } => {
            let cfg = load_config(&config)?;
            let mode: EvalMode = mode.parse()?;
            let (records, report) =
                harness::run_eval(&dataset, &candidates, k, mode, &cfg, out.as_deref())?;
            match mode {
                EvalMode::Summary => println!("{}", serde_json::to_string_pretty(&report)?),
                EvalMode::Detailed => {
                    for r in &records {
                        println!("{}", serde_json::to_string(r)?);
                    }
                    println!("{}", serde_json::to_string_pretty(&report)?);
                }
            }
        }
        Commands::Curriculum {
            policy,
            easy,
            hard,
            tau,
            group,
            seed,
        } => {
            let records = harness::run_curriculum(&policy, &easy, &hard, tau, group, seed)?;
            for r in &records {
                println!("{}", serde_json::to_string(r)?);
            }
        }
        Commands::Serve {
            port,
            dataset,
            config,
        } => {
            let cfg = load_config(&config)?;
            let descriptors = harness::read_jsonl(&dataset)?;
            let handle = harness::serve(port, descriptors, cfg)?;
            eprintln!("serving on {}", handle.url());
            handle.wait();
        }
    }
    Ok(())
}
