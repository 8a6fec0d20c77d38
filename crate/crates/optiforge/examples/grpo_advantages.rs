//! Group-relative advantage normalization and the clipped surrogate, both
//! variants, including the degenerate cold-start group.
//!
//!     cargo run --example grpo_advantages

use optiforge::rl::{
    clipped_surrogate, group_advantages, multi_turn_credit, GroupRewards, RolloutTokens,
    SurrogateInputs, SurrogateVariant, TurnAdvantages,
};

fn main() -> optiforge::Result<()> {
    for rewards in [vec![0.1, 0.2, 1.2], vec![0.0, 0.0, 1.2, 1.2], vec![0.0; 4]] {
        let adv = group_advantages(&GroupRewards::new(rewards.clone()))?;
        println!("rewards {rewards:?} -> advantages {adv:?}");
    }

    let inputs = SurrogateInputs {
        rollouts: vec![
            RolloutTokens {
                ratios: vec![1.0, 2.0, 0.5],
                advantage: 1.0,
            },
            RolloutTokens {
                ratios: vec![0.9, 1.1],
                advantage: -0.5,
            },
        ],
        clip: 0.2,
        variant: SurrogateVariant::LengthNormalized,
    };
    println!(
        "length-normalized surrogate: {:.6}",
        clipped_surrogate(&inputs)?
    );
    let summed = SurrogateInputs {
        variant: SurrogateVariant::TokenSum,
        ..inputs
    };
    println!(
        "token-sum surrogate:         {:.6}",
        clipped_surrogate(&summed)?
    );

    let (turn1, turn2) = multi_turn_credit(&TurnAdvantages {
        intermediate: 0.4,
        outcome: 1.0,
        mix: 1.0,
    });
    println!("two-turn credit: turn1 {turn1}, turn2 {turn2}");
    Ok(())
}
