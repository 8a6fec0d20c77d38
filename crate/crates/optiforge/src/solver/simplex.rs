//! Two-phase primal simplex over a dense tableau.
//!
//! Bland's rule selects both the entering and leaving variable, which
//! guarantees termination under degeneracy. Variables are shifted by their
//! (always finite) lower bound so every structural column is nonnegative;
//! finite upper bounds become explicit rows. Problem sizes here are desk
//! scale, so the dense representation is deliberate.
#![allow(clippy::needless_range_loop)] // index loops mirror the tableau math

use std::collections::BTreeMap;

use crate::problem::{Assignment, Comparator, FormulationIR, Sense, Solution, SolveStatus};
use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;

/// A bound-adjusted LP in dense form: minimize `c.y` subject to rows and
/// `0 <= y_j <= span_j` (span may be infinite).
#[derive(Debug, Clone)]
pub(crate) struct DenseLp {
    pub names: Vec<String>,
    pub lower: Vec<f64>,
    /// Upper bound minus lower bound; `None` when unbounded above.
    pub span: Vec<Option<f64>>,
    /// Rows as (dense coefficients over shifted variables, cmp, rhs).
    pub rows: Vec<(Vec<f64>, Comparator, f64)>,
    /// Minimization costs over shifted variables.
    pub costs: Vec<f64>,
}

impl DenseLp {
    /// Build from a formulation, optionally overriding variable bounds
    /// (used by branch-and-bound nodes) and relaxing integrality.
    pub fn from_ir(
        ir: &FormulationIR,
        bound_overrides: Option<&BTreeMap<String, (f64, Option<f64>)>>,
    ) -> Result<Self> {
        let n = ir.variables.len();
        let mut index = BTreeMap::new();
        for (j, v) in ir.variables.iter().enumerate() {
            index.insert(v.name.clone(), j);
        }
        let mut lower = Vec::with_capacity(n);
        let mut span = Vec::with_capacity(n);
        let mut names = Vec::with_capacity(n);
        for v in &ir.variables {
            let (mut lo, mut up) = (v.lower, v.upper);
            if let Some(over) = bound_overrides.and_then(|m| m.get(&v.name)) {
                lo = over.0;
                up = over.1;
            }
            if let Some(u) = up {
                if lo > u + 1e-12 {
                    // empty box: represent as an unsatisfiable row below
                    names.push(v.name.clone());
                    lower.push(lo);
                    span.push(Some(-1.0));
                    continue;
                }
            }
            names.push(v.name.clone());
            lower.push(lo);
            span.push(up.map(|u| u - lo));
        }
        let mut rows = Vec::new();
        for c in &ir.constraints {
            let mut dense = vec![0.0; n];
            for (name, coeff) in &c.coeffs {
                let j = *index
                    .get(name)
                    .ok_or_else(|| Error::MissingVariable(name.clone()))?;
                dense[j] += coeff;
            }
            // shift rhs by the lower bounds
            let shift: f64 = dense.iter().zip(lower.iter()).map(|(a, l)| a * l).sum();
            rows.push((dense, c.cmp, c.rhs - shift));
        }
        let mut costs = vec![0.0; n];
        for (name, coeff) in &ir.objective.coeffs {
            let j = *index
                .get(name)
                .ok_or_else(|| Error::MissingVariable(name.clone()))?;
            costs[j] += coeff;
        }
        if ir.objective.sense == Sense::Max {
            for c in costs.iter_mut() {
                *c = -*c;
            }
        }
        Ok(DenseLp {
            names,
            lower,
            span,
            rows,
            costs,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solve the dense LP; on success returns unshifted variable values.
pub(crate) fn solve_dense(lp: &DenseLp) -> LpOutcome {
    let n = lp.names.len();
    // empty box detected during construction
    if lp.span.iter().any(|s| matches!(s, Some(d) if *d < 0.0)) {
        return LpOutcome::Infeasible;
    }

    // assemble rows: original rows plus upper-bound rows
    let mut rows: Vec<(Vec<f64>, Comparator, f64)> = lp.rows.clone();
    for (j, s) in lp.span.iter().enumerate() {
        if let Some(d) = s {
            let mut dense = vec![0.0; n];
            dense[j] = 1.0;
            rows.push((dense, Comparator::Le, *d));
        }
    }
    let m = rows.len();
    if m == 0 {
        // unconstrained: minimize each cost term independently
        let mut y = vec![0.0; n];
        for j in 0..n {
            if lp.costs[j] < -COST_EPS {
                match lp.span[j] {
                    Some(d) => y[j] = d,
                    None => return LpOutcome::Unbounded,
                }
            }
        }
        let x: Vec<f64> = y.iter().zip(lp.lower.iter()).map(|(y, l)| y + l).collect();
        return LpOutcome::Optimal(x);
    }

    // normalize rhs >= 0
    for (dense, cmp, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            for a in dense.iter_mut() {
                *a = -*a;
            }
            *rhs = -*rhs;
            *cmp = match *cmp {
                Comparator::Le => Comparator::Ge,
                Comparator::Ge => Comparator::Le,
                Comparator::Eq => Comparator::Eq,
            };
        }
    }

    // column layout: structural | slack/surplus | artificial
    let mut num_slack = 0usize;
    for (_, cmp, _) in &rows {
        if *cmp != Comparator::Eq {
            num_slack += 1;
        }
    }
    let mut num_art = 0usize;
    for (_, cmp, _) in &rows {
        if *cmp != Comparator::Le {
            num_art += 1;
        }
    }
    let total = n + num_slack + num_art;
    let mut t = vec![vec![0.0; total + 1]; m + 2];
    let mut basis = vec![0usize; m];
    let (mut slack_at, mut art_at) = (n, n + num_slack);
    let art_start = n + num_slack;

    for (i, (dense, cmp, rhs)) in rows.iter().enumerate() {
        t[i][..n].copy_from_slice(dense);
        t[i][total] = *rhs;
        match cmp {
            Comparator::Le => {
                t[i][slack_at] = 1.0;
                basis[i] = slack_at;
                slack_at += 1;
            }
            Comparator::Ge => {
                t[i][slack_at] = -1.0;
                slack_at += 1;
                t[i][art_at] = 1.0;
                basis[i] = art_at;
                art_at += 1;
            }
            Comparator::Eq => {
                t[i][art_at] = 1.0;
                basis[i] = art_at;
                art_at += 1;
            }
        }
    }

    // cost rows: m = phase-2 (real costs), m+1 = phase-1 (artificial costs)
    for j in 0..n {
        t[m][j] = lp.costs[j];
    }
    for j in art_start..total {
        t[m + 1][j] = 1.0;
    }
    // price out basic artificials from the phase-1 row
    for i in 0..m {
        if basis[i] >= art_start {
            for j in 0..=total {
                t[m + 1][j] -= t[i][j];
            }
        }
    }

    let max_pivots = 100 * 10 * (m + total + 2);

    // phase 1
    if num_art > 0 {
        match run_simplex(&mut t, &mut basis, m, total, m + 1, total, max_pivots) {
            SimplexRun::Done => {}
            SimplexRun::Unbounded => return LpOutcome::Infeasible,
            SimplexRun::IterationLimit => return LpOutcome::IterationLimit,
        }
        if -t[m + 1][total] > PHASE1_TOL {
            return LpOutcome::Infeasible;
        }
        // drive any basic artificial out of the basis
        for i in 0..m {
            if basis[i] >= art_start {
                let piv = (0..art_start).find(|j| t[i][*j].abs() > PIVOT_EPS);
                if let Some(j) = piv {
                    pivot(&mut t, &mut basis, m, total, i, j);
                }
                // a fully zero row is redundant; its artificial stays basic
                // at value zero and never re-enters (phase 2 ignores it)
            }
        }
    }

    // phase 2: restrict entering columns to non-artificial ones
    match run_simplex(&mut t, &mut basis, m, total, m, art_start, max_pivots) {
        SimplexRun::Done => {}
        SimplexRun::Unbounded => return LpOutcome::Unbounded,
        SimplexRun::IterationLimit => return LpOutcome::IterationLimit,
    }

    let mut y = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            y[basis[i]] = t[i][total];
        }
    }
    let x: Vec<f64> = y
        .iter()
        .zip(lp.lower.iter())
        .map(|(y, l)| y.max(0.0) + l)
        .collect();
    LpOutcome::Optimal(x)
}

enum SimplexRun {
    Done,
    Unbounded,
    IterationLimit,
}

/// Run Bland-rule pivots on cost row `cost_row`, allowing entering columns
/// below `col_limit`. Both cost rows are maintained during pivots.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    m: usize,
    total: usize,
    cost_row: usize,
    col_limit: usize,
    max_pivots: usize,
) -> SimplexRun {
    for _ in 0..max_pivots {
        // Bland: first column with a negative reduced cost
        let entering = (0..col_limit).find(|j| t[cost_row][*j] < -COST_EPS);
        let Some(col) = entering else {
            return SimplexRun::Done;
        };
        // ratio test, Bland tie-break on smallest basis index
        let mut best: Option<(f64, usize, usize)> = None; // ratio, basis var, row
        for i in 0..m {
            let a = t[i][col];
            if a > PIVOT_EPS {
                let ratio = t[i][total] / a;
                match best {
                    None => best = Some((ratio, basis[i], i)),
                    Some((r, bv, _)) => {
                        if ratio < r - PIVOT_EPS || (ratio < r + PIVOT_EPS && basis[i] < bv) {
                            best = Some((ratio, basis[i], i));
                        }
                    }
                }
            }
        }
        let Some((_, _, row)) = best else {
            return SimplexRun::Unbounded;
        };
        pivot(t, basis, m, total, row, col);
    }
    SimplexRun::IterationLimit
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], m: usize, total: usize, row: usize, col: usize) {
    let pv = t[row][col];
    for j in 0..=total {
        t[row][j] /= pv;
    }
    t[row][col] = 1.0;
    for i in 0..m + 2 {
        if i == row {
            continue;
        }
        let f = t[i][col];
        if f.abs() > 0.0 {
            for j in 0..=total {
                t[i][j] -= f * t[row][j];
            }
            t[i][col] = 0.0;
        }
    }
    basis[row] = col;
}

/// Solve a linear program to optimality.
pub fn solve_lp(ir: &FormulationIR) -> Result<Solution> {
    ir.validate()?;
    if ir.category != crate::problem::Category::Lp {
        return Err(Error::CategoryMismatch {
            expected: "lp".into(),
            found: ir.category.to_string(),
        });
    }
    let lp = DenseLp::from_ir(ir, None)?;
    Ok(finish(ir, &lp, solve_dense(&lp)))
}

/// Solve the LP relaxation of a formulation with integrality dropped and
/// optional per-variable bound overrides.
pub(crate) fn solve_relaxation(
    ir: &FormulationIR,
    bound_overrides: Option<&BTreeMap<String, (f64, Option<f64>)>>,
) -> Result<(LpOutcome, DenseLp)> {
    let lp = DenseLp::from_ir(ir, bound_overrides)?;
    let out = solve_dense(&lp);
    Ok((out, lp))
}

pub(crate) fn finish(ir: &FormulationIR, lp: &DenseLp, outcome: LpOutcome) -> Solution {
    match outcome {
        LpOutcome::Optimal(x) => {
            let assignment: Assignment = lp.names.iter().cloned().zip(x.iter().copied()).collect();
            let objective = crate::problem::evaluate_objective(ir, &assignment).unwrap_or(f64::NAN);
            Solution {
                status: SolveStatus::Optimal,
                assignment,
                objective,
                diagnostics: String::new(),
            }
        }
        LpOutcome::Infeasible => Solution::infeasible("simplex: phase 1 found no feasible point"),
        LpOutcome::Unbounded => Solution::unbounded("simplex: objective unbounded"),
        LpOutcome::IterationLimit => Solution {
            status: SolveStatus::IterationLimit,
            assignment: Assignment::new(),
            objective: f64::NAN,
            diagnostics: "simplex: pivot cap reached, numerical trouble likely".into(),
        },
    }
}
