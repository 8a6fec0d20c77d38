//! Group-relative policy-optimization arithmetic: advantage normalization
//! within a rollout group, the clipped surrogate objective in both its
//! length-normalized and token-sum variants, and two-turn credit assignment.
//!
//! Pure numeric functions, no policy or gradient machinery.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Std threshold below which a group counts as degenerate (all rewards
/// effectively equal) and every advantage is zero. This makes the cold-start
/// regime literal: all-zero rewards produce an all-zero gradient signal.
pub const DEGENERATE_STD: f64 = 1e-12;

/// Rewards of one rollout group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRewards {
    pub rewards: Vec<f64>,
}

impl GroupRewards {
    pub fn new(rewards: Vec<f64>) -> Self {
        GroupRewards { rewards }
    }
}

/// Normalize rewards to group-relative advantages: subtract the group mean
/// and divide by the population standard deviation. Degenerate groups yield
/// all zeros.
pub fn group_advantages(group: &GroupRewards) -> Result<Vec<f64>> {
    let n = group.rewards.len();
    if n < 2 {
        return Err(Error::GroupTooSmall(n));
    }
    if let Some(bad) = group.rewards.iter().find(|r| !r.is_finite()) {
        return Err(Error::Domain(format!("non-finite reward {bad}")));
    }
    let mean = group.rewards.iter().sum::<f64>() / n as f64;
    let variance = group
        .rewards
        .iter()
        .map(|r| (r - mean).powi(2))
        .sum::<f64>()
        / n as f64;
    let std = variance.sqrt();
    if std < DEGENERATE_STD {
        return Ok(vec![0.0; n]);
    }
    Ok(group.rewards.iter().map(|r| (r - mean) / std).collect())
}

/// Which per-rollout weighting the surrogate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurrogateVariant {
    /// Average per-token terms within each rollout (1/|c| factor).
    LengthNormalized,
    /// Sum per-token terms without the length factor.
    TokenSum,
}

/// One rollout's token-level importance ratios and its broadcast advantage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolloutTokens {
    pub ratios: Vec<f64>,
    pub advantage: f64,
}

/// Inputs to the clipped surrogate objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateInputs {
    pub rollouts: Vec<RolloutTokens>,
    pub clip: f64,
    pub variant: SurrogateVariant,
}

/// The clipped surrogate objective: for every token,
/// `min(ratio * adv, clamp(ratio, 1-eps, 1+eps) * adv)`, aggregated per
/// rollout (averaged or summed depending on the variant) and averaged over
/// the group.
pub fn clipped_surrogate(inputs: &SurrogateInputs) -> Result<f64> {
    if !(0.0..1.0).contains(&inputs.clip) || inputs.clip == 0.0 {
        return Err(Error::Domain(format!(
            "clip parameter {} outside (0, 1)",
            inputs.clip
        )));
    }
    if inputs.rollouts.is_empty() {
        return Err(Error::Domain("empty rollout group".into()));
    }
    let mut acc = 0.0;
    for (i, rollout) in inputs.rollouts.iter().enumerate() {
        if rollout.ratios.is_empty() {
            return Err(Error::Domain(format!("rollout {i} has no tokens")));
        }
        let mut inner = 0.0;
        for ratio in &rollout.ratios {
            if *ratio <= 0.0 || !ratio.is_finite() {
                return Err(Error::Domain(format!(
                    "nonpositive importance ratio {ratio} in rollout {i}"
                )));
            }
            let clipped = ratio.clamp(1.0 - inputs.clip, 1.0 + inputs.clip);
            inner += (ratio * rollout.advantage).min(clipped * rollout.advantage);
        }
        match inputs.variant {
            SurrogateVariant::LengthNormalized => {
                acc += inner / rollout.ratios.len() as f64;
            }
            SurrogateVariant::TokenSum => acc += inner,
        }
    }
    Ok(acc / inputs.rollouts.len() as f64)
}

/// Intermediate and outcome advantages for a two-turn trajectory, with the
/// mixing weight applied to the outcome signal in turn one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnAdvantages {
    pub intermediate: f64,
    pub outcome: f64,
    pub mix: f64,
}

/// Two-turn credit assignment: turn one receives the intermediate advantage
/// plus `mix` times the outcome advantage; turn two receives the outcome
/// advantage alone.
pub fn multi_turn_credit(t: &TurnAdvantages) -> (f64, f64) {
    (t.intermediate + t.mix * t.outcome, t.outcome)
}
