//! Domain model: problem categories, formulations, world descriptors,
//! solutions, and pointwise evaluation of objectives and constraints.
//!
//! A [`FormulationIR`] is the canonical machine-checkable representation of
//! an optimization problem. Linear and mixed-integer problems carry explicit
//! linear constraints; pump-network problems carry a typed [`PumpInstance`]
//! instead, since their constraint system is the fixed physics of the pump
//! characteristic curves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pump::PumpInstance;
use crate::{pump, Error, Result, FEAS_TOL, INT_TOL};

/// Problem category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Lp,
    Milp,
    Pump,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Category::Lp => write!(f, "lp"),
            Category::Milp => write!(f, "milp"),
            Category::Pump => write!(f, "pump"),
        }
    }
}

/// Domain of a decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarDomain {
    Continuous,
    Integer,
    Binary,
}

impl VarDomain {
    pub fn is_integral(self) -> bool {
        matches!(self, VarDomain::Integer | VarDomain::Binary)
    }
}

/// A decision variable. `upper: None` marks an unbounded-above variable;
/// lower bounds are always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: VarDomain,
    pub lower: f64,
    #[serde(default)]
    pub upper: Option<f64>,
}

impl Variable {
    pub fn continuous(name: &str, lower: f64, upper: Option<f64>) -> Self {
        Variable {
            name: name.to_string(),
            domain: VarDomain::Continuous,
            lower,
            upper,
        }
    }

    pub fn integer(name: &str, lower: f64, upper: Option<f64>) -> Self {
        Variable {
            name: name.to_string(),
            domain: VarDomain::Integer,
            lower,
            upper,
        }
    }

    pub fn binary(name: &str) -> Self {
        Variable {
            name: name.to_string(),
            domain: VarDomain::Binary,
            lower: 0.0,
            upper: Some(1.0),
        }
    }
}

/// Constraint comparator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparator {
    Le,
    Eq,
    Ge,
}

impl std::fmt::Display for Comparator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Comparator::Le => write!(f, "<="),
            Comparator::Eq => write!(f, "="),
            Comparator::Ge => write!(f, ">="),
        }
    }
}

/// One linear constraint: `coeffs . x  cmp  rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: BTreeMap<String, f64>,
    pub cmp: Comparator,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: &[(&str, f64)], cmp: Comparator, rhs: f64) -> Self {
        LinearConstraint {
            coeffs: coeffs.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            cmp,
            rhs,
        }
    }
}

/// Optimization sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// Linear objective. Maximization is stored as-is; solvers negate internally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: BTreeMap<String, f64>,
    #[serde(default)]
    pub offset: f64,
}

impl Objective {
    pub fn new(sense: Sense, coeffs: &[(&str, f64)], offset: f64) -> Self {
        Objective {
            sense,
            coeffs: coeffs.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            offset,
        }
    }
}

/// Canonical solver-executable representation of an optimization problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulationIR {
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Objective,
    pub category: Category,
    #[serde(default)]
    pub pump: Option<PumpInstance>,
}

/// A variable assignment.
pub type Assignment = BTreeMap<String, f64>;

impl FormulationIR {
    /// Structural validation: unique names, declared coefficients, ordered
    /// bounds, and category consistency.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variables {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
            if let Some(u) = v.upper {
                if v.lower > u + 1e-12 {
                    return Err(Error::InvalidIr(format!(
                        "variable `{}` has lower bound {} above upper bound {}",
                        v.name, v.lower, u
                    )));
                }
            }
        }
        for (ci, c) in self.constraints.iter().enumerate() {
            for name in c.coeffs.keys() {
                if !seen.contains(name.as_str()) {
                    return Err(Error::InvalidIr(format!(
                        "constraint {} references undeclared variable `{}`",
                        ci, name
                    )));
                }
            }
        }
        for name in self.objective.coeffs.keys() {
            if !seen.contains(name.as_str()) {
                return Err(Error::InvalidIr(format!(
                    "objective references undeclared variable `{}`",
                    name
                )));
            }
        }
        match self.category {
            Category::Lp => {
                if self.pump.is_some() {
                    return Err(Error::InvalidIr("lp formulation carries pump data".into()));
                }
                if let Some(v) = self.variables.iter().find(|v| v.domain.is_integral()) {
                    return Err(Error::InvalidIr(format!(
                        "lp formulation declares integral variable `{}`",
                        v.name
                    )));
                }
            }
            Category::Milp => {
                if self.pump.is_some() {
                    return Err(Error::InvalidIr(
                        "milp formulation carries pump data".into(),
                    ));
                }
                if !self.variables.iter().any(|v| v.domain.is_integral()) {
                    return Err(Error::InvalidIr(
                        "milp formulation has no integer or binary variable".into(),
                    ));
                }
            }
            Category::Pump => {
                let inst = self
                    .pump
                    .as_ref()
                    .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;
                inst.validate()?;
                if !self.constraints.is_empty() {
                    return Err(Error::InvalidIr(
                        "pump formulation must not carry linear constraints".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Canonical JSON serialization (maps are ordered, so this is stable).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("formulation serializes")
    }
}

/// Ground-truth tuple: formulation, optimal solution, objective value, and
/// descriptive metadata. The basis for description rendering and rewards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldDescriptor {
    pub id: String,
    pub formulation: FormulationIR,
    /// Optimal assignment `x*`.
    pub solution: Assignment,
    /// Objective value at `x*`.
    pub objective_value: f64,
    pub metadata: Metadata,
    pub difficulty: Difficulty,
}

/// Descriptive metadata carried alongside a formulation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metadata {
    /// Scenario label the description renderer writes against.
    #[serde(default)]
    pub scenario: String,
    /// Variable name -> unit of measure.
    #[serde(default)]
    pub units: BTreeMap<String, String>,
    /// Variable name -> structural role (for example "binary on/off switch").
    #[serde(default)]
    pub roles: BTreeMap<String, String>,
    /// Constraint index -> short label used in prose.
    #[serde(default)]
    pub constraint_labels: BTreeMap<usize, String>,
}

/// Difficulty tag used by the curriculum scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Hard,
}

/// Terminal status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solver output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: SolveStatus,
    pub assignment: Assignment,
    pub objective: f64,
    pub diagnostics: String,
}

impl Solution {
    pub fn infeasible(diag: &str) -> Self {
        Solution {
            status: SolveStatus::Infeasible,
            assignment: Assignment::new(),
            objective: f64::NAN,
            diagnostics: diag.to_string(),
        }
    }

    pub fn unbounded(diag: &str) -> Self {
        Solution {
            status: SolveStatus::Unbounded,
            assignment: Assignment::new(),
            objective: f64::NAN,
            diagnostics: diag.to_string(),
        }
    }
}

/// Result of validating a world descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub complexity_pass: bool,
    pub trivial_fraction: f64,
    pub messages: Vec<String>,
}

/// Share of decision variables that may sit at their lower bound at the
/// optimum before an instance counts as under-constrained.
pub const TRIVIAL_FRACTION_LIMIT: f64 = 0.25;

/// Evaluate the raw (sense-agnostic) objective at a point.
///
/// Pump formulations evaluate the total-cost objective from the assignment's
/// configuration variables; linear categories sum `coefficient * value` plus
/// the constant offset.
pub fn evaluate_objective(ir: &FormulationIR, point: &Assignment) -> Result<f64> {
    for v in &ir.variables {
        if !point.contains_key(&v.name) {
            return Err(Error::MissingVariable(v.name.clone()));
        }
    }
    if ir.category == Category::Pump {
        let inst = ir
            .pump
            .as_ref()
            .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;
        return pump::cost_from_assignment(inst, point);
    }
    let mut total = ir.objective.offset;
    for (name, coeff) in &ir.objective.coeffs {
        let x = point
            .get(name)
            .ok_or_else(|| Error::MissingVariable(name.clone()))?;
        total += coeff * x;
    }
    Ok(total)
}

/// Residual of one linear constraint at a point, normalized to the
/// `g(x) <= 0` convention: nonpositive means satisfied.
///
/// `<=` rows give `lhs - rhs`, `>=` rows give `rhs - lhs`, and `=` rows give
/// the absolute violation `|lhs - rhs|` so one tolerance governs all three.
pub fn constraint_residual(c: &LinearConstraint, point: &Assignment) -> Result<f64> {
    let mut lhs = 0.0;
    for (name, coeff) in &c.coeffs {
        let x = point
            .get(name)
            .ok_or_else(|| Error::MissingVariable(name.clone()))?;
        lhs += coeff * x;
    }
    Ok(match c.cmp {
        Comparator::Le => lhs - c.rhs,
        Comparator::Ge => c.rhs - lhs,
        Comparator::Eq => (lhs - c.rhs).abs(),
    })
}

/// Residuals of every constraint at a point, in constraint order.
///
/// The point is feasible with respect to the constraint system iff the
/// maximum residual is at most the feasibility tolerance. Pump formulations
/// return the residuals of the pump constraint system.
pub fn constraint_residuals(ir: &FormulationIR, point: &Assignment) -> Result<Vec<f64>> {
    for v in &ir.variables {
        if !point.contains_key(&v.name) {
            return Err(Error::MissingVariable(v.name.clone()));
        }
    }
    if ir.category == Category::Pump {
        let inst = ir
            .pump
            .as_ref()
            .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;
        return pump::residuals_from_assignment(inst, point);
    }
    ir.constraints
        .iter()
        .map(|c| constraint_residual(c, point))
        .collect()
}

/// Residuals of the variable bound and integrality requirements at a point,
/// normalized like constraint residuals.
pub fn bound_residuals(ir: &FormulationIR, point: &Assignment) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for v in &ir.variables {
        let x = *point
            .get(&v.name)
            .ok_or_else(|| Error::MissingVariable(v.name.clone()))?;
        out.push(v.lower - x);
        if let Some(u) = v.upper {
            out.push(x - u);
        }
        if v.domain.is_integral() {
            out.push((x - x.round()).abs());
        }
    }
    Ok(out)
}

/// Whether a point satisfies constraints, bounds, and integrality within the
/// feasibility tolerance.
pub fn is_feasible(ir: &FormulationIR, point: &Assignment) -> Result<bool> {
    let cons = constraint_residuals(ir, point)?;
    let bounds = bound_residuals(ir, point)?;
    Ok(cons.iter().chain(bounds.iter()).all(|r| *r <= FEAS_TOL))
}

/// Fraction of decision variables sitting at their lower bound at `x*`.
/// For pump descriptors this is the fraction of inactive pump types.
pub fn trivial_fraction(w: &WorldDescriptor) -> Result<f64> {
    if w.formulation.category == Category::Pump {
        let inst = w
            .formulation
            .pump
            .as_ref()
            .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;
        let n = inst.types.len();
        let mut inactive = 0usize;
        for i in 0..n {
            let z = w
                .solution
                .get(&pump::var_name("z", i))
                .copied()
                .unwrap_or(0.0);
            if z < 0.5 {
                inactive += 1;
            }
        }
        return Ok(inactive as f64 / n as f64);
    }
    let n = w.formulation.variables.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut at_lower = 0usize;
    for v in &w.formulation.variables {
        let x = *w
            .solution
            .get(&v.name)
            .ok_or_else(|| Error::MissingVariable(v.name.clone()))?;
        if (x - v.lower).abs() <= INT_TOL {
            at_lower += 1;
        }
    }
    Ok(at_lower as f64 / n as f64)
}

/// Check a descriptor's stored ground truth: `x*` must be feasible, the
/// stored objective must agree with direct evaluation, and the instance must
/// clear the triviality threshold. Failures are reported, never raised.
pub fn validate_descriptor(w: &WorldDescriptor) -> ValidationReport {
    let mut messages = Vec::new();
    let mut feasible = true;

    if let Err(e) = w.formulation.validate() {
        return ValidationReport {
            feasible: false,
            complexity_pass: false,
            trivial_fraction: 1.0,
            messages: vec![format!("formulation invalid: {e}")],
        };
    }

    match is_feasible(&w.formulation, &w.solution) {
        Ok(true) => {}
        Ok(false) => {
            feasible = false;
            messages.push("stored solution violates a constraint or bound".into());
        }
        Err(e) => {
            feasible = false;
            messages.push(format!("stored solution incomplete: {e}"));
        }
    }

    match evaluate_objective(&w.formulation, &w.solution) {
        Ok(v) => {
            let tol = 1e-6 * (1.0 + w.objective_value.abs());
            if (v - w.objective_value).abs() > tol {
                feasible = false;
                messages.push(format!(
                    "stored objective {} disagrees with evaluation {}",
                    w.objective_value, v
                ));
            }
        }
        Err(e) => {
            feasible = false;
            messages.push(format!("objective evaluation failed: {e}"));
        }
    }

    let frac = trivial_fraction(w).unwrap_or(1.0);
    let complexity_pass = frac <= TRIVIAL_FRACTION_LIMIT + 1e-12;
    if !complexity_pass {
        messages.push(format!(
            "trivial-variable fraction {frac:.3} exceeds {TRIVIAL_FRACTION_LIMIT}"
        ));
    }

    ValidationReport {
        feasible,
        complexity_pass,
        trivial_fraction: frac,
        messages,
    }
}

/// Sort variables, constraints, and coefficient maps into a canonical order.
/// Idempotent; preserves semantics (only ordering changes).
pub fn canonicalize(ir: &FormulationIR) -> Result<FormulationIR> {
    let mut seen = std::collections::BTreeSet::new();
    for v in &ir.variables {
        if !seen.insert(v.name.as_str()) {
            return Err(Error::DuplicateVariable(v.name.clone()));
        }
    }
    let mut out = ir.clone();
    out.variables.sort_by(|a, b| a.name.cmp(&b.name));
    out.constraints.sort_by(|a, b| {
        a.cmp
            .cmp(&b.cmp)
            .then_with(|| {
                let fa: Vec<(&String, &f64)> = a.coeffs.iter().collect();
                let fb: Vec<(&String, &f64)> = b.coeffs.iter().collect();
                fa.len().cmp(&fb.len()).then_with(|| {
                    for ((na, va), (nb, vb)) in fa.iter().zip(fb.iter()) {
                        let ord = na.cmp(nb).then(va.total_cmp(vb));
                        if ord != std::cmp::Ordering::Equal {
                            return ord;
                        }
                    }
                    std::cmp::Ordering::Equal
                })
            })
            .then(a.rhs.total_cmp(&b.rhs))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(pairs: &[(&str, f64)]) -> Assignment {
        pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
    }

    fn two_var_lp() -> FormulationIR {
        FormulationIR {
            variables: vec![
                Variable::continuous("x", 0.0, None),
                Variable::continuous("y", 0.0, None),
            ],
            constraints: vec![
                LinearConstraint::new(&[("x", 1.0)], Comparator::Le, 1.0),
                LinearConstraint::new(&[("y", 1.0)], Comparator::Le, 1.0),
            ],
            objective: Objective::new(Sense::Max, &[("x", 2.0), ("y", 3.0)], 0.0),
            category: Category::Lp,
            pump: None,
        }
    }

    #[test]
    fn objective_direct_substitution() {
        let ir = two_var_lp();
        let v = evaluate_objective(&ir, &point(&[("x", 1.0), ("y", 1.0)])).unwrap();
        assert_eq!(v, 5.0);
    }

    #[test]
    fn objective_constant_offset() {
        let mut ir = two_var_lp();
        ir.objective = Objective::new(Sense::Min, &[], 7.0);
        let v = evaluate_objective(&ir, &point(&[("x", 3.0), ("y", -2.0)])).unwrap();
        assert_eq!(v, 7.0);
    }

    #[test]
    fn objective_missing_variable_named() {
        let ir = two_var_lp();
        let err = evaluate_objective(&ir, &point(&[("x", 1.0)])).unwrap_err();
        assert!(matches!(err, Error::MissingVariable(n) if n == "y"));
    }

    #[test]
    fn residual_boundary_is_zero() {
        let c = LinearConstraint::new(&[("x", 1.0)], Comparator::Le, 1.0);
        assert_eq!(constraint_residual(&c, &point(&[("x", 1.0)])).unwrap(), 0.0);
    }

    #[test]
    fn residual_violated_ge() {
        let c = LinearConstraint::new(&[("x", 1.0)], Comparator::Ge, 2.0);
        assert_eq!(constraint_residual(&c, &point(&[("x", 1.0)])).unwrap(), 1.0);
    }

    #[test]
    fn residual_equality_absolute() {
        let c = LinearConstraint::new(&[("x", 1.0), ("y", 1.0)], Comparator::Eq, 3.0);
        assert_eq!(
            constraint_residual(&c, &point(&[("x", 1.0), ("y", 1.0)])).unwrap(),
            1.0
        );
    }

    fn descriptor_with_solution(sol: &[(&str, f64)], obj: f64) -> WorldDescriptor {
        let ir = FormulationIR {
            variables: vec![
                Variable::continuous("a", 0.0, Some(10.0)),
                Variable::continuous("b", 0.0, Some(10.0)),
                Variable::continuous("c", 0.0, Some(10.0)),
                Variable::continuous("d", 0.0, Some(10.0)),
            ],
            constraints: vec![LinearConstraint::new(
                &[("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)],
                Comparator::Le,
                40.0,
            )],
            objective: Objective::new(
                Sense::Max,
                &[("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)],
                0.0,
            ),
            category: Category::Lp,
            pump: None,
        };
        WorldDescriptor {
            id: "t".into(),
            formulation: ir,
            solution: point(sol),
            objective_value: obj,
            metadata: Metadata::default(),
            difficulty: Difficulty::Easy,
        }
    }

    #[test]
    fn trivial_fraction_three_quarters_fails_complexity() {
        let w = descriptor_with_solution(&[("a", 0.0), ("b", 0.0), ("c", 0.0), ("d", 5.0)], 5.0);
        let rep = validate_descriptor(&w);
        assert_eq!(rep.trivial_fraction, 0.75);
        assert!(!rep.complexity_pass);
        assert!(rep.feasible);
    }

    #[test]
    fn all_interior_passes_complexity() {
        let w = descriptor_with_solution(&[("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)], 10.0);
        let rep = validate_descriptor(&w);
        assert_eq!(rep.trivial_fraction, 0.0);
        assert!(rep.complexity_pass);
        assert!(rep.feasible);
    }

    #[test]
    fn objective_disagreement_marks_infeasible() {
        let w = descriptor_with_solution(&[("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)], 10.1);
        let rep = validate_descriptor(&w);
        assert!(!rep.feasible);
        assert!(rep.messages.iter().any(|m| m.contains("disagrees")));
    }

    #[test]
    fn canonicalize_sorts_variables() {
        let mut ir = two_var_lp();
        ir.variables.reverse();
        let canon = canonicalize(&ir).unwrap();
        let names: Vec<&str> = canon.variables.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["x", "y"]);
        // same semantics: identical residuals at a probe point
        let p = point(&[("x", 0.4), ("y", 0.7)]);
        let mut before = constraint_residuals(&ir, &p).unwrap();
        let mut after = constraint_residuals(&canon, &p).unwrap();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        assert_eq!(before, after);
    }

    #[test]
    fn canonicalize_idempotent() {
        let mut ir = two_var_lp();
        ir.variables.reverse();
        ir.constraints.reverse();
        let once = canonicalize(&ir).unwrap();
        let twice = canonicalize(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn canonicalize_constraint_order_invariant() {
        let a = two_var_lp();
        let mut b = two_var_lp();
        b.constraints.reverse();
        assert_eq!(
            canonicalize(&a).unwrap().canonical_json(),
            canonicalize(&b).unwrap().canonical_json()
        );
    }

    #[test]
    fn canonicalize_rejects_duplicate_names() {
        let mut ir = two_var_lp();
        ir.variables[1].name = "x".into();
        assert!(matches!(
            canonicalize(&ir),
            Err(Error::DuplicateVariable(n)) if n == "x"
        ));
    }

    #[test]
    fn serialization_field_names_are_exact() {
        let ir = two_var_lp();
        let v: serde_json::Value = serde_json::from_str(&ir.canonical_json()).unwrap();
        let obj = v.as_object().unwrap();
        for key in ["variables", "constraints", "objective", "category", "pump"] {
            assert!(obj.contains_key(key), "missing field {key}");
        }
        assert_eq!(obj["category"], "lp");

        let w = WorldDescriptor {
            id: "w1".into(),
            formulation: ir,
            solution: point(&[("x", 1.0), ("y", 1.0)]),
            objective_value: 5.0,
            metadata: Metadata::default(),
            difficulty: Difficulty::Easy,
        };
        let v = serde_json::to_value(&w).unwrap();
        let obj = v.as_object().unwrap();
        for key in [
            "id",
            "formulation",
            "solution",
            "objective_value",
            "metadata",
            "difficulty",
        ] {
            assert!(obj.contains_key(key), "missing field {key}");
        }
    }

    #[test]
    fn unbounded_upper_serializes_as_null() {
        let v = serde_json::to_value(Variable::continuous("x", 0.0, None)).unwrap();
        assert!(v.as_object().unwrap()["upper"].is_null());
    }

    #[test]
    fn milp_without_integers_rejected() {
        let mut ir = two_var_lp();
        ir.category = Category::Milp;
        assert!(ir.validate().is_err());
    }

    #[test]
    fn undeclared_coefficient_rejected() {
        let mut ir = two_var_lp();
        ir.constraints.push(LinearConstraint::new(
            &[("ghost", 1.0)],
            Comparator::Le,
            1.0,
        ));
        assert!(matches!(ir.validate(), Err(Error::InvalidIr(_))));
    }
}
