//! Two-turn clarification environment: an incomplete description is served,
//! a single query may be routed to the omission oracle, and a committed
//! candidate is scored for intermediate and outcome rewards.
//!
//! The environment owns the omission ledger. Agents can only learn omitted
//! values by asking a query whose keywords hit a ledger entry; committing
//! without a query is allowed and simply earns no intermediate reward.

use serde::{Deserialize, Serialize};

use crate::describe::{omit, oracle_answer, Description, OmissionLedger};
use crate::problem::WorldDescriptor;
use crate::reward::{multi_turn_reward_with, Candidate, RewardConfig};
use crate::{Error, Result};

/// Tag pair a first-turn query must carry to earn the format component.
pub const QUERY_TAG_OPEN: &str = "<query>";
pub const QUERY_TAG_CLOSE: &str = "</query>";

/// Extract the inner question from a correctly tagged query.
pub fn extract_tagged_query(raw: &str) -> Option<&str> {
    let trimmed = raw.trim();
    let inner = trimmed
        .strip_prefix(QUERY_TAG_OPEN)?
        .strip_suffix(QUERY_TAG_CLOSE)?;
    Some(inner.trim())
}

/// A sealed two-turn interaction record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// The incomplete description served at reset.
    pub incomplete: Description,
    /// Raw first-turn query ("" when the agent committed immediately).
    pub query: String,
    /// Oracle reply ("" when no query was made).
    pub oracle_reply: String,
    /// Terminal candidate; present iff the trajectory is terminal.
    pub candidate: Option<Candidate>,
    pub r_intermediate: f64,
    pub r_outcome: f64,
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Turn {
    AwaitingQueryOrCommit,
    AwaitingCommit,
    Sealed,
}

/// One live episode. Construct with [`reset`].
#[derive(Debug, Clone)]
pub struct Episode {
    world: WorldDescriptor,
    incomplete: Description,
    ledger: OmissionLedger,
    reward_config: RewardConfig,
    turn: Turn,
    query: String,
    reply: String,
}

/// Start an episode: render the descriptor with `omissions` elements
/// withheld. Returns the episode and the incomplete description the agent
/// sees. Deterministic per (descriptor, omissions, seed).
pub fn reset(w: &WorldDescriptor, omissions: usize, seed: u64) -> Result<(Episode, Description)> {
    let (incomplete, ledger) = omit(w, omissions, seed)?;
    let episode = Episode {
        world: w.clone(),
        incomplete: incomplete.clone(),
        ledger,
        reward_config: RewardConfig::default(),
        turn: Turn::AwaitingQueryOrCommit,
        query: String::new(),
        reply: String::new(),
    };
    Ok((episode, incomplete))
}

impl Episode {
    /// The incomplete description served to the agent.
    pub fn description(&self) -> &Description {
        &self.incomplete
    }

    /// Number of omissions in play (their identities stay hidden).
    pub fn omission_count(&self) -> usize {
        self.ledger.entries.len()
    }

    pub fn with_reward_config(mut self, cfg: RewardConfig) -> Self {
        self.reward_config = cfg;
        self
    }

    /// Turn 1: submit the clarification query, receive the oracle's answer.
    /// Only one query is permitted.
    pub fn step_query(&mut self, query: &str) -> Result<String> {
        match self.turn {
            Turn::AwaitingQueryOrCommit => {}
            Turn::AwaitingCommit => {
                return Err(Error::OutOfTurn(
                    "the single permitted query was already used".into(),
                ))
            }
            Turn::Sealed => return Err(Error::AlreadyTerminal),
        }
        let inner = extract_tagged_query(query).unwrap_or(query);
        let answer = oracle_answer(inner, &self.world, &self.ledger);
        self.query = query.to_string();
        self.reply = answer.text.clone();
        self.turn = Turn::AwaitingCommit;
        Ok(answer.text)
    }

    /// Final turn: commit a candidate, sealing the episode and scoring it.
    /// Committing without a prior query is allowed.
    pub fn step_commit(&mut self, candidate: Candidate) -> Result<(f64, f64, Trajectory)> {
        if self.turn == Turn::Sealed {
            return Err(Error::AlreadyTerminal);
        }
        let mut trajectory = Trajectory {
            incomplete: self.incomplete.clone(),
            query: self.query.clone(),
            oracle_reply: self.reply.clone(),
            candidate: Some(candidate),
            r_intermediate: 0.0,
            r_outcome: 0.0,
            terminal: true,
        };
        let (r_i, r_o) =
            multi_turn_reward_with(&trajectory, &self.world, &self.ledger, &self.reward_config)?;
        trajectory.r_intermediate = r_i;
        trajectory.r_outcome = r_o;
        self.turn = Turn::Sealed;
        Ok((r_i, r_o, trajectory))
    }
}
