//! Curriculum scheduling: a solvability estimator over policy rollouts, the
//! phase-viability gate, privileged-prompt augmentation, and the three-phase
//! progression (privileged easy -> plain easy -> plain hard).
//!
//! Policies here are behavior contracts, not neural networks: scripted
//! policies drive the tests, a replay policy feeds recorded candidates, and
//! an external client can bridge to a live model.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::describe::{render_description, Description, TextClient};
use crate::problem::{Difficulty, WorldDescriptor};
use crate::reward::{evaluate_candidate_with, Candidate, RewardConfig};
use crate::{Error, Result};

/// Produces a candidate for a prompt. Scripted implementations receive the
/// descriptor because they stand in for policies of known strength; the
/// prompt is what a real model would consume.
pub trait Policy {
    fn propose(&self, prompt: &str, w: &WorldDescriptor, rng: &mut ChaCha8Rng) -> Candidate;

    fn label(&self) -> String {
        "policy".into()
    }
}

/// Always emits an unusable candidate (no reward component can fire).
pub struct ScriptedFail;

impl Policy for ScriptedFail {
    fn propose(&self, _prompt: &str, _w: &WorldDescriptor, _rng: &mut ChaCha8Rng) -> Candidate {
        Candidate::from_bundle(Default::default(), f64::NAN)
    }

    fn label(&self) -> String {
        "scripted-fail".into()
    }
}

/// Emits the ground-truth formulation with probability `success_rate`,
/// otherwise an unusable candidate.
pub struct ScriptedOracle {
    pub success_rate: f64,
}

impl Policy for ScriptedOracle {
    fn propose(&self, _prompt: &str, w: &WorldDescriptor, rng: &mut ChaCha8Rng) -> Candidate {
        if rng.random_bool(self.success_rate.clamp(0.0, 1.0)) {
            Candidate::from_ir(w.formulation.clone())
        } else {
            Candidate::from_bundle(Default::default(), f64::NAN)
        }
    }

    fn label(&self) -> String {
        format!("scripted-oracle:{}", self.success_rate)
    }
}

/// Solves problems of one difficulty tag only; used to exercise the gate.
pub struct DifficultyGatedOracle {
    pub solves: Difficulty,
}

impl Policy for DifficultyGatedOracle {
    fn propose(&self, _prompt: &str, w: &WorldDescriptor, _rng: &mut ChaCha8Rng) -> Candidate {
        if w.difficulty == self.solves {
            Candidate::from_ir(w.formulation.clone())
        } else {
            Candidate::from_bundle(Default::default(), f64::NAN)
        }
    }

    fn label(&self) -> String {
        "difficulty-gated-oracle".into()
    }
}

/// Replays a fixed candidate list, cycling when exhausted.
pub struct ReplayPolicy {
    candidates: Vec<Candidate>,
    cursor: std::sync::atomic::AtomicUsize,
}

impl ReplayPolicy {
    pub fn new(candidates: Vec<Candidate>) -> Self {
        ReplayPolicy {
            candidates,
            cursor: std::sync::atomic::AtomicUsize::new(0),
        }
    }
}

impl Policy for ReplayPolicy {
    fn propose(&self, _prompt: &str, _w: &WorldDescriptor, _rng: &mut ChaCha8Rng) -> Candidate {
        if self.candidates.is_empty() {
            return Candidate::from_bundle(Default::default(), f64::NAN);
        }
        let i = self
            .cursor
            .fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        self.candidates[i % self.candidates.len()].clone()
    }

    fn label(&self) -> String {
        "replay".into()
    }
}

/// Bridges to an external completion endpoint: the prompt is sent as-is and
/// the reply is parsed as a candidate formulation in JSON.
pub struct ExternalPolicy {
    pub client: Box<dyn TextClient>,
}

impl Policy for ExternalPolicy {
    fn propose(&self, prompt: &str, _w: &WorldDescriptor, _rng: &mut ChaCha8Rng) -> Candidate {
        match self.client.complete(prompt) {
            Ok(text) => match serde_json::from_str::<crate::problem::FormulationIR>(&text) {
                Ok(ir) => Candidate {
                    payload: crate::reward::CandidatePayload::FormulationIr { ir },
                    raw_text: Some(text),
                },
                Err(_) => Candidate {
                    payload: crate::reward::CandidatePayload::SolutionBundle {
                        assignment: Default::default(),
                        claimed_objective: f64::NAN,
                    },
                    raw_text: Some(text),
                },
            },
            Err(_) => Candidate::from_bundle(Default::default(), f64::NAN),
        }
    }

    fn label(&self) -> String {
        format!("external:{}", self.client.endpoint())
    }
}

/// Scheduler state: which phase is active, which distribution it trains on,
/// and whether prompts carry privileged solver guidance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub phase: u8,
    pub distribution: Difficulty,
    pub privileged: bool,
    pub tau: f64,
    pub group_size: usize,
}

impl PhaseState {
    /// Phase 1: privileged prompts on the easy distribution.
    pub fn start(tau: f64, group_size: usize) -> Self {
        PhaseState {
            phase: 1,
            distribution: Difficulty::Easy,
            privileged: true,
            tau,
            group_size,
        }
    }

    fn configure(phase: u8, tau: f64, group_size: usize) -> Self {
        let (distribution, privileged) = match phase {
            1 => (Difficulty::Easy, true),
            2 => (Difficulty::Easy, false),
            _ => (Difficulty::Hard, false),
        };
        PhaseState {
            phase,
            distribution,
            privileged,
            tau,
            group_size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.phase) {
            return Err(Error::Config(format!("phase {} outside 1..=3", self.phase)));
        }
        let expect = Self::configure(self.phase, self.tau, self.group_size);
        if (self.distribution, self.privileged) != (expect.distribution, expect.privileged) {
            return Err(Error::Config(format!(
                "phase {} must pair {:?} with privileged={}",
                self.phase, expect.distribution, expect.privileged
            )));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Config("tau must lie in [0, 1]".into()));
        }
        if self.group_size == 0 {
            return Err(Error::Config("group size must be positive".into()));
        }
        Ok(())
    }

    pub fn is_terminal(&self) -> bool {
        self.phase >= 3
    }
}

/// Default solvability threshold.
pub const DEFAULT_TAU: f64 = 0.05;
/// Default rollout group size (also the estimator's k).
pub const DEFAULT_GROUP: usize = 8;

/// Fixed privileged preamble: a cheat sheet for the formulation schema the
/// scorer executes.
pub const PRIVILEGED_SYNTAX_BLOCK: &str = "Solver guidance: answer with a JSON formulation \
object holding `variables` (name, domain continuous|integer|binary, lower, upper or null), \
`constraints` (coeffs map, cmp le|eq|ge, rhs), `objective` (sense min|max, coeffs, offset), \
and `category`. Pump problems instead carry the instance under `pump` and are judged on the \
flattened z/num_s/num_p/w/vdot/dp/P/x variables.";

/// Phase 1 prepends the syntax block and an explicit constraint listing;
/// later phases return the description text unchanged.
pub fn augment_privileged(d: &Description, state: &PhaseState, w: &WorldDescriptor) -> String {
    if !state.privileged {
        return d.text.clone();
    }
    let mut block = String::new();
    block.push_str(PRIVILEGED_SYNTAX_BLOCK);
    block.push_str("\nConstraints, mapped out:\n");
    if let Some(inst) = &w.formulation.pump {
        block.push_str(&format!(
            "  sum of flow fractions = 1; per active type dp * num_s = {}; speed <= {}; per-type power <= its cap\n",
            inst.dp_total, inst.omega_max
        ));
    }
    for (i, c) in w.formulation.constraints.iter().enumerate() {
        let terms: Vec<String> = c.coeffs.iter().map(|(n, v)| format!("{v}*{n}")).collect();
        block.push_str(&format!(
            "  g{}: {} {} {}\n",
            i,
            terms.join(" + "),
            c.cmp,
            c.rhs
        ));
    }
    format!("{block}\n{}", d.text)
}

fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    ChaCha8Rng::seed_from_u64(z)
}

/// Fraction of problems where at least one of `k` rollouts earns a positive
/// reward. Each problem draws its rollouts from an independent substream of
/// `seed`, so estimates with larger `k` extend smaller ones.
pub fn estimate_solvability(
    policy: &dyn Policy,
    problems: &[WorldDescriptor],
    k: usize,
    seed: u64,
) -> f64 {
    estimate_with_prompts(
        policy,
        problems,
        k,
        seed,
        &RewardConfig::default(),
        |d, _| d.text.clone(),
    )
}

pub(crate) fn estimate_with_prompts(
    policy: &dyn Policy,
    problems: &[WorldDescriptor],
    k: usize,
    seed: u64,
    cfg: &RewardConfig,
    prompt_of: impl Fn(&Description, &WorldDescriptor) -> String,
) -> f64 {
    if problems.is_empty() || k == 0 {
        return 0.0;
    }
    let mut solved = 0usize;
    for (i, w) in problems.iter().enumerate() {
        let prompt = match render_description(w, 0) {
            Ok(d) => prompt_of(&d, w),
            Err(_) => String::new(),
        };
        let mut rng = substream(seed, i as u64);
        for _ in 0..k {
            let candidate = policy.propose(&prompt, w, &mut rng);
            if evaluate_candidate_with(&candidate, w, cfg).total > 0.0 {
                solved += 1;
                break;
            }
        }
    }
    solved as f64 / problems.len() as f64
}

/// The viability gate: a phase may start iff the measured solvability
/// reaches the threshold.
pub fn gate(solvability: f64, tau: f64) -> bool {
    solvability >= tau
}

/// Outcome of one advancement attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvanceOutcome {
    pub state: PhaseState,
    /// Solvability measured on the next phase's distribution (0 when the
    /// schedule is already terminal).
    pub solvability: f64,
    pub advanced: bool,
}

/// Measure solvability under the NEXT phase's distribution and prompt
/// augmentation; advance iff the gate opens. Phase 3 is terminal.
pub fn advance(
    policy: &dyn Policy,
    state: &PhaseState,
    easy: &[WorldDescriptor],
    hard: &[WorldDescriptor],
    seed: u64,
) -> Result<AdvanceOutcome> {
    state.validate()?;
    if state.is_terminal() {
        return Ok(AdvanceOutcome {
            state: state.clone(),
            solvability: 0.0,
            advanced: false,
        });
    }
    let next = PhaseState::configure(state.phase + 1, state.tau, state.group_size);
    let pool = match next.distribution {
        Difficulty::Easy => easy,
        Difficulty::Hard => hard,
    };
    let next_for_prompt = next.clone();
    let s = estimate_with_prompts(
        policy,
        pool,
        state.group_size,
        seed,
        &RewardConfig::default(),
        move |d, w| augment_privileged(d, &next_for_prompt, w),
    );
    if gate(s, state.tau) {
        Ok(AdvanceOutcome {
            state: next,
            solvability: s,
            advanced: true,
        })
    } else {
        Ok(AdvanceOutcome {
            state: state.clone(),
            solvability: s,
            advanced: false,
        })
    }
}
