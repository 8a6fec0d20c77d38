//! Shared brute-force oracles and instance samplers for the integration
//! and acceptance suites. Independent of the solver implementation paths
//! they are used to check.
#![allow(dead_code)] // each test target uses a different subset
#![allow(clippy::needless_range_loop)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use optiforge::problem::{
    Assignment, Category, Comparator, FormulationIR, LinearConstraint, Objective, Sense, Variable,
};

/// Solve an LP by enumerating every basic point from n-subsets of the
/// hyperplane arrangement (constraints plus box faces) and keeping the best
/// feasible one.
pub fn vertex_enumeration_optimum(ir: &FormulationIR) -> Option<f64> {
    let n = ir.variables.len();
    let names: Vec<&str> = ir.variables.iter().map(|v| v.name.as_str()).collect();
    // rows: (coeffs, rhs) treated as equalities when selected
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in &ir.constraints {
        let mut dense = vec![0.0; n];
        for (name, coeff) in &c.coeffs {
            let j = names.iter().position(|x| x == name).unwrap();
            dense[j] = *coeff;
        }
        rows.push((dense, c.rhs));
    }
    for (j, v) in ir.variables.iter().enumerate() {
        let mut face = vec![0.0; n];
        face[j] = 1.0;
        rows.push((face.clone(), v.lower));
        if let Some(u) = v.upper {
            rows.push((face, u));
        }
    }

    let feasible = |x: &[f64]| -> bool {
        for c in &ir.constraints {
            let lhs: f64 = c
                .coeffs
                .iter()
                .map(|(name, coeff)| {
                    let j = names.iter().position(|v| v == name).unwrap();
                    coeff * x[j]
                })
                .sum();
            let ok = match c.cmp {
                Comparator::Le => lhs <= c.rhs + 1e-6,
                Comparator::Ge => lhs >= c.rhs - 1e-6,
                Comparator::Eq => (lhs - c.rhs).abs() <= 1e-6,
            };
            if !ok {
                return false;
            }
        }
        for (j, v) in ir.variables.iter().enumerate() {
            if x[j] < v.lower - 1e-6 {
                return false;
            }
            if let Some(u) = v.upper {
                if x[j] > u + 1e-6 {
                    return false;
                }
            }
        }
        true
    };

    let objective = |x: &[f64]| -> f64 {
        ir.objective.offset
            + ir.objective
                .coeffs
                .iter()
                .map(|(name, coeff)| {
                    let j = names.iter().position(|v| v == name).unwrap();
                    coeff * x[j]
                })
                .sum::<f64>()
    };

    let mut best: Option<f64> = None;
    let mut subset = vec![0usize; n];
    enumerate_subsets(rows.len(), n, 0, 0, &mut subset, &mut |sel| {
        if let Some(x) = solve_square(&rows, sel) {
            if feasible(&x) {
                let v = objective(&x);
                best = Some(match (best, ir.objective.sense) {
                    (None, _) => v,
                    (Some(b), Sense::Max) => b.max(v),
                    (Some(b), Sense::Min) => b.min(v),
                });
            }
        }
    });
    best
}

pub fn enumerate_subsets(
    total: usize,
    want: usize,
    start: usize,
    depth: usize,
    buf: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == want {
        f(buf);
        return;
    }
    for i in start..total {
        buf[depth] = i;
        enumerate_subsets(total, want, i + 1, depth + 1, buf, f);
    }
}

/// Gaussian elimination with partial pivoting on the selected rows.
pub fn solve_square(rows: &[(Vec<f64>, f64)], sel: &[usize]) -> Option<Vec<f64>> {
    let n = sel.len();
    let mut m: Vec<Vec<f64>> = sel
        .iter()
        .map(|&i| {
            let mut r = rows[i].0.clone();
            r.push(rows[i].1);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col];
        for k in col..=n {
            m[col][k] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != 0.0 {
                    for k in col..=n {
                        m[r][k] -= f * m[col][k];
                    }
                }
            }
        }
    }
    Some(m.iter().map(|r| r[n]).collect())
}

pub fn random_lp(rng: &mut ChaCha8Rng) -> FormulationIR {
    let n = rng.random_range(2..=5);
    let m = rng.random_range(1..=6);
    let names: Vec<String> = (0..n).map(|j| format!("v{j}")).collect();
    let uppers: Vec<f64> = (0..n).map(|_| rng.random_range(1..=10) as f64).collect();
    let variables: Vec<Variable> = names
        .iter()
        .zip(uppers.iter())
        .map(|(nm, u)| Variable::continuous(nm, 0.0, Some(*u)))
        .collect();
    // most rows are anchored at a random interior point so the majority of
    // instances are feasible; a few stay fully random to cover infeasibility
    let anchor: Vec<f64> = uppers
        .iter()
        .map(|u| u * rng.random_range(0.2..0.8))
        .collect();
    let mut constraints = Vec::new();
    for _ in 0..m {
        let dense: Vec<f64> = (0..n)
            .map(|_| (rng.random_range(-30..=50) as f64) / 10.0)
            .collect();
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|s| s.as_str())
            .zip(dense.iter().copied())
            .collect();
        let at_anchor: f64 = dense.iter().zip(anchor.iter()).map(|(a, t)| a * t).sum();
        let (cmp, rhs) = if rng.random_bool(0.75) {
            match rng.random_range(0..6) {
                0 => (Comparator::Ge, at_anchor - rng.random_range(0.0..4.0)),
                1 => (Comparator::Eq, at_anchor),
                _ => (Comparator::Le, at_anchor + rng.random_range(0.0..4.0)),
            }
        } else {
            let cmp = match rng.random_range(0..6) {
                0 => Comparator::Ge,
                1 => Comparator::Eq,
                _ => Comparator::Le,
            };
            (cmp, (rng.random_range(-20..=80) as f64) / 4.0)
        };
        constraints.push(LinearConstraint::new(&coeffs, cmp, rhs));
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), (rng.random_range(-40..=60) as f64) / 10.0))
        .collect();
    let sense = if rng.random_bool(0.5) {
        Sense::Max
    } else {
        Sense::Min
    };
    FormulationIR {
        variables,
        constraints,
        objective: Objective::new(sense, &obj, 0.0),
        category: Category::Lp,
        pump: None,
    }
}

pub fn random_ilp(rng: &mut ChaCha8Rng) -> FormulationIR {
    let n = rng.random_range(2..=8);
    let names: Vec<String> = (0..n).map(|j| format!("n{j}")).collect();
    let variables: Vec<Variable> = names
        .iter()
        .map(|nm| {
            if rng.random_bool(0.4) {
                Variable::binary(nm)
            } else {
                Variable::integer(nm, 0.0, Some(rng.random_range(1..=3) as f64))
            }
        })
        .collect();
    let m = rng.random_range(1..=5);
    let mut constraints = Vec::new();
    for _ in 0..m {
        let coeffs: Vec<(&str, f64)> = names
            .iter()
            .map(|nm| (nm.as_str(), rng.random_range(-4..=6) as f64))
            .collect();
        let cmp = if rng.random_bool(0.75) {
            Comparator::Le
        } else {
            Comparator::Ge
        };
        let rhs = rng.random_range(-2..=14) as f64;
        constraints.push(LinearConstraint::new(&coeffs, cmp, rhs));
    }
    let obj: Vec<(&str, f64)> = names
        .iter()
        .map(|nm| (nm.as_str(), rng.random_range(-9..=12) as f64))
        .collect();
    let sense = if rng.random_bool(0.5) {
        Sense::Max
    } else {
        Sense::Min
    };
    FormulationIR {
        variables,
        constraints,
        objective: Objective::new(sense, &obj, 0.0),
        category: Category::Milp,
        pump: None,
    }
}

/// Walk the full integer lattice of the box and keep the best feasible
/// objective.
pub fn lattice_optimum(ir: &FormulationIR) -> Option<f64> {
    let uppers: Vec<u32> = ir
        .variables
        .iter()
        .map(|v| v.upper.unwrap_or(1.0) as u32)
        .collect();
    let mut point: Vec<u32> = vec![0; uppers.len()];
    let mut best: Option<f64> = None;
    loop {
        let assignment: Assignment = ir
            .variables
            .iter()
            .zip(point.iter())
            .map(|(v, p)| (v.name.clone(), *p as f64))
            .collect();
        if optiforge::problem::is_feasible(ir, &assignment).unwrap() {
            let v = optiforge::problem::evaluate_objective(ir, &assignment).unwrap();
            best = Some(match (best, ir.objective.sense) {
                (None, _) => v,
                (Some(b), Sense::Max) => b.max(v),
                (Some(b), Sense::Min) => b.min(v),
            });
        }
        // odometer
        let mut i = 0;
        loop {
            if i == point.len() {
                return best;
            }
            if point[i] < uppers[i] {
                point[i] += 1;
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}
