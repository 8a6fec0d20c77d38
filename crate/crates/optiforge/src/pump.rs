//! Centrifugal pump network model: characteristic curves, instance data,
//! configurations, and the constraint system tying them together.
//!
//! A pump type is described by six characteristic coefficients. With speed
//! ratio `r = omega / omega_max` and per-pump flow `v`:
//!
//! ```text
//! P(r, v)  = m1 r^3 + m2 r^2 v - m3 r v^2        (power)
//! dp(r, v) = m4 r v + m5 r^2   - m6 v^2          (pressure rise)
//! ```
//!
//! A configuration selects, per type, an on/off flag `z`, series count
//! `num_s`, parallel count `num_p`, speed, per-pump flow, and flow fraction.
//! Every active type must deliver the full target pressure rise through its
//! series arrangement (`dp * num_s = dp_total`), and flow fractions sum to
//! one with `x * v_total = vdot * num_p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::problem::{Assignment, VarDomain, Variable};
use crate::{Error, Result, FEAS_TOL};

/// Characteristic data for one pump type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpTypeParams {
    /// Power cap for a single pump of this type.
    pub p_max: f64,
    /// Fixed cost per installed pump.
    pub fixed_cost: f64,
    /// Cost per unit of power per installed pump.
    pub power_cost: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
}

impl PumpTypeParams {
    /// Power at speed ratio `r` and per-pump flow `v`.
    pub fn power(&self, r: f64, v: f64) -> f64 {
        self.m1 * r.powi(3) + self.m2 * r.powi(2) * v - self.m3 * r * v * v
    }

    /// Pressure rise at speed ratio `r` and per-pump flow `v`.
    pub fn pressure(&self, r: f64, v: f64) -> f64 {
        self.m4 * r * v + self.m5 * r.powi(2) - self.m6 * v * v
    }

    /// Maximum pressure rise achievable at full speed over all flows.
    pub fn max_pressure_rise(&self) -> f64 {
        self.m5 + self.m4 * self.m4 / (4.0 * self.m6)
    }

    /// Speed ratio delivering exactly `dp_req` at per-pump flow `v`, if one
    /// exists within [0, 1]. The pressure curve is increasing in `r`, so the
    /// nonnegative quadratic root is unique.
    pub fn speed_ratio_for(&self, dp_req: f64, v: f64) -> Option<f64> {
        let disc = (self.m4 * v).powi(2) + 4.0 * self.m5 * (self.m6 * v * v + dp_req);
        if disc < 0.0 {
            return None;
        }
        let r = (-self.m4 * v + disc.sqrt()) / (2.0 * self.m5);
        if r > 1.0 + 1e-9 {
            None
        } else {
            Some(r.clamp(0.0, 1.0))
        }
    }

    /// Per-pump flow interval `[v_lo, v_hi]` on which `dp_req` is deliverable
    /// with speed ratio at most one, ignoring the power cap.
    pub fn flow_range(&self, dp_req: f64) -> Option<(f64, f64)> {
        // dp(1, v) >= dp_req  <=>  m6 v^2 - m4 v + (dp_req - m5) <= 0
        let disc = self.m4 * self.m4 - 4.0 * self.m6 * (dp_req - self.m5);
        if disc < 0.0 {
            return None;
        }
        let lo = (self.m4 - disc.sqrt()) / (2.0 * self.m6);
        let hi = (self.m4 + disc.sqrt()) / (2.0 * self.m6);
        if hi < 0.0 {
            return None;
        }
        Some((lo.max(0.0), hi))
    }
}

/// All scalars and per-type coefficients of a pump network instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpInstance {
    /// Total volumetric flowrate the network must deliver.
    pub v_total: f64,
    /// Target pressure rise.
    pub dp_total: f64,
    /// Maximum rotation speed (RPM).
    pub omega_max: f64,
    /// Upper bound on pumps in series per type.
    pub series_max: u32,
    /// Upper bound on parallel lines per type.
    pub parallel_max: u32,
    pub types: Vec<PumpTypeParams>,
}

impl PumpInstance {
    pub fn validate(&self) -> Result<()> {
        if self.types.is_empty() {
            return Err(Error::InvalidIr("pump instance has no types".into()));
        }
        if self.series_max < 1 || self.parallel_max < 1 {
            return Err(Error::InvalidIr(
                "series and parallel bounds must be at least 1".into(),
            ));
        }
        let scalars = [self.v_total, self.dp_total, self.omega_max];
        if scalars.iter().any(|s| *s <= 0.0) {
            return Err(Error::InvalidIr(
                "pump scalars must be strictly positive".into(),
            ));
        }
        for (i, t) in self.types.iter().enumerate() {
            let coeffs = [
                t.p_max,
                t.fixed_cost,
                t.power_cost,
                t.m1,
                t.m2,
                t.m3,
                t.m4,
                t.m5,
                t.m6,
            ];
            if coeffs.iter().any(|c| *c <= 0.0) {
                return Err(Error::InvalidIr(format!(
                    "pump type {i} has a nonpositive coefficient"
                )));
            }
        }
        Ok(())
    }

    /// The flattened decision variables of this instance, following the
    /// naming scheme `z_i, num_s_i, num_p_i, w_i, vdot_i, dp_i, P_i, x_i`.
    pub fn derive_variables(&self) -> Vec<Variable> {
        let mut vars = Vec::new();
        for (i, t) in self.types.iter().enumerate() {
            vars.push(Variable {
                name: var_name("z", i),
                domain: VarDomain::Binary,
                lower: 0.0,
                upper: Some(1.0),
            });
            vars.push(Variable {
                name: var_name("num_s", i),
                domain: VarDomain::Integer,
                lower: 0.0,
                upper: Some(self.series_max as f64),
            });
            vars.push(Variable {
                name: var_name("num_p", i),
                domain: VarDomain::Integer,
                lower: 0.0,
                upper: Some(self.parallel_max as f64),
            });
            vars.push(Variable::continuous(
                &var_name("w", i),
                0.0,
                Some(self.omega_max),
            ));
            vars.push(Variable::continuous(
                &var_name("vdot", i),
                0.0,
                Some(self.v_total),
            ));
            vars.push(Variable::continuous(
                &var_name("dp", i),
                0.0,
                Some(self.dp_total),
            ));
            vars.push(Variable::continuous(&var_name("P", i), 0.0, Some(t.p_max)));
            vars.push(Variable::continuous(&var_name("x", i), 0.0, Some(1.0)));
        }
        vars
    }
}

/// Flattened variable name for pump type `i`.
pub fn var_name(prefix: &str, i: usize) -> String {
    format!("{prefix}_{i}")
}

/// Per-type slice of a pump configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpTypeConfig {
    pub active: bool,
    pub series: u32,
    pub parallel: u32,
    /// Rotation speed in RPM (not the ratio).
    pub speed: f64,
    /// Per-pump flow.
    pub flow: f64,
    /// Per-pump power.
    pub power: f64,
    /// Per-pump pressure rise.
    pub pressure_rise: f64,
    pub flow_fraction: f64,
}

impl PumpTypeConfig {
    pub fn inactive() -> Self {
        PumpTypeConfig {
            active: false,
            series: 0,
            parallel: 0,
            speed: 0.0,
            flow: 0.0,
            power: 0.0,
            pressure_rise: 0.0,
            flow_fraction: 0.0,
        }
    }
}

/// A full network configuration, one entry per pump type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    pub types: Vec<PumpTypeConfig>,
}

impl PumpConfig {
    /// Enforce the structural invariants: inactive types are all-zero,
    /// active types have in-range counts, fractions sum to one and couple
    /// to per-pump flow.
    pub fn validate(&self, inst: &PumpInstance) -> Result<()> {
        if self.types.len() != inst.types.len() {
            return Err(Error::InvalidIr(format!(
                "configuration covers {} types, instance has {}",
                self.types.len(),
                inst.types.len()
            )));
        }
        let mut frac_sum = 0.0;
        for (i, t) in self.types.iter().enumerate() {
            if !t.active {
                let zeroed = t.series == 0
                    && t.parallel == 0
                    && t.speed == 0.0
                    && t.flow == 0.0
                    && t.power == 0.0
                    && t.pressure_rise == 0.0
                    && t.flow_fraction == 0.0;
                if !zeroed {
                    return Err(Error::InvalidIr(format!(
                        "inactive type {i} carries nonzero fields"
                    )));
                }
                continue;
            }
            if t.series < 1 || t.series > inst.series_max {
                return Err(Error::InvalidIr(format!(
                    "type {i} series count {} outside [1, {}]",
                    t.series, inst.series_max
                )));
            }
            if t.parallel < 1 || t.parallel > inst.parallel_max {
                return Err(Error::InvalidIr(format!(
                    "type {i} parallel count {} outside [1, {}]",
                    t.parallel, inst.parallel_max
                )));
            }
            let coupled = t.flow * t.parallel as f64 / inst.v_total;
            if (coupled - t.flow_fraction).abs() > FEAS_TOL {
                return Err(Error::InvalidIr(format!(
                    "type {i} flow fraction {} does not match flow coupling {}",
                    t.flow_fraction, coupled
                )));
            }
            frac_sum += t.flow_fraction;
        }
        if (frac_sum - 1.0).abs() > FEAS_TOL {
            return Err(Error::InvalidIr(format!(
                "flow fractions sum to {frac_sum}, expected 1"
            )));
        }
        Ok(())
    }

    /// Indices of active types.
    pub fn active_set(&self) -> Vec<usize> {
        self.types
            .iter()
            .enumerate()
            .filter(|(_, t)| t.active)
            .map(|(i, _)| i)
            .collect()
    }

    /// Total number of installed pumps.
    pub fn pump_count(&self) -> u32 {
        self.types
            .iter()
            .filter(|t| t.active)
            .map(|t| t.series * t.parallel)
            .sum()
    }

    /// Flatten into the `z_i, num_s_i, ...` assignment naming scheme.
    pub fn to_assignment(&self) -> Assignment {
        let mut a = BTreeMap::new();
        for (i, t) in self.types.iter().enumerate() {
            a.insert(var_name("z", i), if t.active { 1.0 } else { 0.0 });
            a.insert(var_name("num_s", i), t.series as f64);
            a.insert(var_name("num_p", i), t.parallel as f64);
            a.insert(var_name("w", i), t.speed);
            a.insert(var_name("vdot", i), t.flow);
            a.insert(var_name("dp", i), t.pressure_rise);
            a.insert(var_name("P", i), t.power);
            a.insert(var_name("x", i), t.flow_fraction);
        }
        a
    }

    /// Reconstruct from a flattened assignment.
    pub fn from_assignment(inst: &PumpInstance, point: &Assignment) -> Result<Self> {
        let get = |name: String| -> Result<f64> {
            point
                .get(&name)
                .copied()
                .ok_or(Error::MissingVariable(name))
        };
        let mut types = Vec::new();
        for i in 0..inst.types.len() {
            let z = get(var_name("z", i))?;
            types.push(PumpTypeConfig {
                active: z > 0.5,
                series: get(var_name("num_s", i))?.round() as u32,
                parallel: get(var_name("num_p", i))?.round() as u32,
                speed: get(var_name("w", i))?,
                flow: get(var_name("vdot", i))?,
                power: get(var_name("P", i))?,
                pressure_rise: get(var_name("dp", i))?,
                flow_fraction: get(var_name("x", i))?,
            });
        }
        Ok(PumpConfig { types })
    }

    /// Render the configuration as a fixed-width table, one row per type.
    pub fn render_table(&self, cost: f64) -> String {
        let mut out = String::new();
        out.push_str(&format!("Total Objective (Cost): ${cost:.2}\n"));
        out.push_str(&format!(
            "{:<6} {:<8} {:<8} {:<10} {:<12} {:<12} {:<15}\n",
            "Pump", "On/Off", "Series", "Parallel", "Power (kW)", "Speed (rpm)", "Flow Fraction"
        ));
        for (i, t) in self.types.iter().enumerate() {
            if t.active {
                out.push_str(&format!(
                    "{:<6} {:<8} {:<8} {:<10} {:<12.2} {:<12.2} {:<15.3}\n",
                    i + 1,
                    1,
                    t.series,
                    t.parallel,
                    t.power,
                    t.speed,
                    t.flow_fraction
                ));
            } else {
                out.push_str(&format!(
                    "{:<6} {:<8} {:<8} {:<10} {:<12} {:<12} {:<15}\n",
                    i + 1,
                    "OFF",
                    "-",
                    "-",
                    "0.00",
                    "0.00",
                    "0.000"
                ));
            }
        }
        out
    }
}

/// Power of one pump given absolute speed `omega`.
pub fn pump_power(params: &PumpTypeParams, omega: f64, omega_max: f64, vdot: f64) -> Result<f64> {
    check_speed_domain(omega, omega_max, vdot)?;
    Ok(params.power(omega / omega_max, vdot))
}

/// Pressure rise of one pump given absolute speed `omega`.
pub fn pump_pressure(
    params: &PumpTypeParams,
    omega: f64,
    omega_max: f64,
    vdot: f64,
) -> Result<f64> {
    check_speed_domain(omega, omega_max, vdot)?;
    Ok(params.pressure(omega / omega_max, vdot))
}

fn check_speed_domain(omega: f64, omega_max: f64, vdot: f64) -> Result<()> {
    if omega < 0.0 || omega > omega_max {
        return Err(Error::Domain(format!(
            "speed {omega} outside [0, {omega_max}]"
        )));
    }
    if vdot < 0.0 {
        return Err(Error::Domain(format!("flow {vdot} is negative")));
    }
    Ok(())
}

/// Total network cost of a configuration:
/// `sum_i (C_i + Cd_i * P_i) * num_p_i * num_s_i * z_i`.
pub fn pump_total_cost(inst: &PumpInstance, config: &PumpConfig) -> f64 {
    config
        .types
        .iter()
        .zip(inst.types.iter())
        .map(|(c, t)| {
            if c.active {
                (t.fixed_cost + t.power_cost * c.power) * c.parallel as f64 * c.series as f64
            } else {
                0.0
            }
        })
        .sum()
}

/// Total cost evaluated directly from a flattened assignment. Uses the
/// literal `z` values as multipliers, mirroring the objective expression.
pub fn cost_from_assignment(inst: &PumpInstance, point: &Assignment) -> Result<f64> {
    let get = |name: String| -> Result<f64> {
        point
            .get(&name)
            .copied()
            .ok_or(Error::MissingVariable(name))
    };
    let mut total = 0.0;
    for (i, t) in inst.types.iter().enumerate() {
        let z = get(var_name("z", i))?;
        let ns = get(var_name("num_s", i))?;
        let np = get(var_name("num_p", i))?;
        let p = get(var_name("P", i))?;
        total += (t.fixed_cost + t.power_cost * p) * np * ns * z;
    }
    Ok(total)
}

/// Residuals of the full pump constraint system at a flattened assignment,
/// normalized to the `g(x) <= 0` convention (equalities as absolute
/// violation). Covers: fraction balance, characteristic-curve consistency,
/// flow and pressure coupling, activation big-M caps, minimum counts for
/// active types, and integrality of the discrete variables.
pub fn residuals_from_assignment(inst: &PumpInstance, point: &Assignment) -> Result<Vec<f64>> {
    let get = |name: String| -> Result<f64> {
        point
            .get(&name)
            .copied()
            .ok_or(Error::MissingVariable(name))
    };
    let mut res = Vec::new();
    let mut frac_sum = 0.0;
    for (i, t) in inst.types.iter().enumerate() {
        let z = get(var_name("z", i))?;
        let ns = get(var_name("num_s", i))?;
        let np = get(var_name("num_p", i))?;
        let w = get(var_name("w", i))?;
        let v = get(var_name("vdot", i))?;
        let dp = get(var_name("dp", i))?;
        let p = get(var_name("P", i))?;
        let x = get(var_name("x", i))?;
        frac_sum += x;

        let r = (w / inst.omega_max).clamp(0.0, f64::MAX);
        res.push((p - t.power(r, v)).abs());
        res.push((dp - t.pressure(r, v)).abs());
        res.push((x * inst.v_total - v * np).abs());
        res.push((z * inst.dp_total - dp * ns).abs());
        // activation caps
        res.push(w - inst.omega_max * z);
        res.push(p - t.p_max * z);
        res.push(dp - inst.dp_total * z);
        res.push(v - inst.v_total * z);
        res.push(np - inst.parallel_max as f64 * z);
        res.push(ns - inst.series_max as f64 * z);
        // an active type uses at least one pump each way
        res.push(z - np);
        res.push(z - ns);
        // integrality and sign
        res.push((z - z.round()).abs());
        res.push((ns - ns.round()).abs());
        res.push((np - np.round()).abs());
        res.push(-z);
        res.push(z - 1.0);
        for val in [ns, np, w, v, dp, p, x] {
            res.push(-val);
        }
    }
    res.push((frac_sum - 1.0).abs());
    Ok(res)
}
