//! Key-value configuration file: `key = value` lines, `#` comments.
//! Unknown keys are rejected so typos cannot silently fall back to
//! defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::reward::RewardConfig;
use crate::{curriculum, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub reward: RewardConfig,
    pub tau: f64,
    pub group_size: usize,
    /// Outcome-advantage mixing weight for turn-one credit.
    pub alpha_mix: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            reward: RewardConfig::default(),
            tau: curriculum::DEFAULT_TAU,
            group_size: curriculum::DEFAULT_GROUP,
            alpha_mix: 1.0,
        }
    }
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = HarnessConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = || -> Result<f64> {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("line {}: bad number `{value}`", i + 1)))
            };
            match key {
                "weight_exec" => cfg.reward.weight_exec = parse_f64()?,
                "weight_feas" => cfg.reward.weight_feas = parse_f64()?,
                "weight_opt" => cfg.reward.weight_opt = parse_f64()?,
                "weight_query" => cfg.reward.weight_query = parse_f64()?,
                "pump_cost_rel_tol" => cfg.reward.pump_cost_rel_tol = parse_f64()?,
                "pump_power_rel_tol" => cfg.reward.pump_power_rel_tol = parse_f64()?,
                "tau" => cfg.tau = parse_f64()?,
                "alpha_mix" => cfg.alpha_mix = parse_f64()?,
                "group_size" => {
                    cfg.group_size = value.parse::<usize>().map_err(|_| {
                        Error::Config(format!("line {}: bad integer `{value}`", i + 1))
                    })?
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        i + 1
                    )))
                }
            }
        }
        cfg.reward.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_rejects_unknown_keys() {
        let cfg = HarnessConfig::parse("tau = 0.2\nweight_opt = 2.0 # bigger\n").unwrap();
        assert_eq!(cfg.tau, 0.2);
        assert_eq!(cfg.reward.weight_opt, 2.0);
        assert!(HarnessConfig::parse("nope = 1\n").is_err());
        // weight ordering still enforced after overrides
        assert!(HarnessConfig::parse("weight_opt = 0.05\n").is_err());
    }
}
