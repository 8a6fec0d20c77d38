//! Targeted omission for the clarification setting, plus the deterministic
//! oracle that answers queries about what was left out. The environment
//! holds the ledger; agents only ever see the incomplete text and the
//! oracle's replies.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::problem::WorldDescriptor;
use crate::{Error, Result};

use super::render::render_with_omissions;
use super::{
    constraint_label, elements_of, fmt_num, render_description, split_sentences, tokenize,
    Description, OmissionLedger, OmittedElement, OmittedKind,
};

fn kind_of(id: &str) -> Option<OmittedKind> {
    if id.starts_with("obj:coef:") || id.contains(":coef:") || id.ends_with(":rhs") {
        Some(OmittedKind::Coefficient)
    } else if id.starts_with("var:") {
        Some(OmittedKind::Bound)
    } else if id.starts_with("pump:") {
        Some(OmittedKind::Parameter)
    } else if id.starts_with("con:") && !id.contains(":coef:") {
        Some(OmittedKind::WholeConstraint)
    } else {
        None
    }
}

fn value_text(w: &WorldDescriptor, id: &str, style_seed: u64) -> String {
    let ir = &w.formulation;
    if let Some(name) = id.strip_prefix("obj:coef:") {
        let v = ir.objective.coeffs.get(name).copied().unwrap_or(0.0);
        return format!(
            "The objective contribution per unit of {name} is {}.",
            fmt_num(v.abs())
        );
    }
    if id == "obj:offset" {
        return format!(
            "The objective carries a fixed term of {}.",
            fmt_num(ir.objective.offset.abs())
        );
    }
    if let Some(rest) = id.strip_prefix("con:") {
        if let Some((ci, tail)) = rest.split_once(':') {
            let i: usize = ci.parse().unwrap_or(0);
            let label = constraint_label(w, i);
            if tail == "rhs" {
                let rhs = ir.constraints.get(i).map(|c| c.rhs).unwrap_or(0.0);
                return format!(
                    "The {label} requirement has a right-hand value of {}.",
                    fmt_num(rhs.abs())
                );
            }
            if let Some(name) = tail.strip_prefix("coef:") {
                let v = ir
                    .constraints
                    .get(i)
                    .and_then(|c| c.coeffs.get(name))
                    .copied()
                    .unwrap_or(0.0);
                return format!(
                    "In the {label} requirement, the multiplier on {name} is {}.",
                    fmt_num(v.abs())
                );
            }
        } else {
            // whole constraint: serve the full original sentence
            let i: usize = rest.parse().unwrap_or(0);
            if let Ok(full) = render_description(w, style_seed) {
                if let Some(idxs) = full.manifest.get(id) {
                    let sentences = split_sentences(&full.text);
                    if let Some(&k) = idxs.first() {
                        if let Some(s) = sentences.get(k) {
                            return s.clone();
                        }
                    }
                }
            }
            return format!("Requirement {} applies.", i + 1);
        }
    }
    if let Some(rest) = id.strip_prefix("var:") {
        if let Some((name, which)) = rest.rsplit_once(':') {
            if let Some(v) = ir.variable(name) {
                return match which {
                    "lower" => {
                        format!("The quantity {name} must be at least {}.", fmt_num(v.lower))
                    }
                    _ => format!(
                        "The quantity {name} is capped at {}.",
                        fmt_num(v.upper.unwrap_or(f64::INFINITY))
                    ),
                };
            }
        }
    }
    if let Some(rest) = id.strip_prefix("pump:scalar:") {
        if let Some(inst) = &ir.pump {
            let (what, v) = match rest {
                "v_total" => ("total required flowrate", inst.v_total),
                "dp_total" => ("total required pressure rise", inst.dp_total),
                "omega_max" => ("maximum pump speed in RPM", inst.omega_max),
                "series_max" => ("maximum pumps in series per type", inst.series_max as f64),
                _ => ("maximum parallel lines per type", inst.parallel_max as f64),
            };
            return format!("The {what} is {}.", fmt_num(v));
        }
    }
    if let Some(rest) = id.strip_prefix("pump:type:") {
        if let Some((ti, field)) = rest.split_once(':') {
            if let Some(inst) = &ir.pump {
                let i: usize = ti.parse().unwrap_or(0);
                if let Some(t) = inst.types.get(i) {
                    let (what, v) = match field {
                        "m1" => ("coefficient m1", t.m1),
                        "m2" => ("coefficient m2", t.m2),
                        "m3" => ("coefficient m3", t.m3),
                        "m4" => ("coefficient m4", t.m4),
                        "m5" => ("coefficient m5", t.m5),
                        "m6" => ("coefficient m6", t.m6),
                        "p_max" => ("power cap", t.p_max),
                        "fixed_cost" => ("base cost", t.fixed_cost),
                        _ => ("power cost", t.power_cost),
                    };
                    return format!("For pump type {}, the {what} is {}.", i + 1, fmt_num(v));
                }
            }
        }
    }
    format!("No record for {id}.")
}

/// Render an incomplete description by withholding `count` elements, and
/// return the private ledger of what was removed.
pub fn omit(w: &WorldDescriptor, count: usize, seed: u64) -> Result<(Description, OmissionLedger)> {
    if !(1..=3).contains(&count) {
        return Err(Error::Domain(format!(
            "omission count {count} outside the supported 1..=3 range"
        )));
    }
    let elements = elements_of(w);
    let mut pool: Vec<(String, OmittedKind)> = elements
        .iter()
        .filter_map(|e| kind_of(&e.id).map(|k| (e.id.clone(), k)))
        .collect();
    if pool.len() < count {
        return Err(Error::InsufficientElements {
            requested: count,
            available: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);

    let mut chosen: Vec<(String, OmittedKind)> = Vec::new();
    for (id, kind) in pool {
        if chosen.len() == count {
            break;
        }
        // avoid overlapping picks: a whole constraint subsumes its values
        let conflict = chosen.iter().any(|(c, ck)| {
            (*ck == OmittedKind::WholeConstraint && id.starts_with(&format!("{c}:")))
                || (kind == OmittedKind::WholeConstraint && c.starts_with(&format!("{id}:")))
        });
        if !conflict {
            chosen.push((id, kind));
        }
    }
    if chosen.len() < count {
        return Err(Error::InsufficientElements {
            requested: count,
            available: chosen.len(),
        });
    }

    let omitted: BTreeSet<String> = chosen.iter().map(|(id, _)| id.clone()).collect();
    let mut with_children = omitted.clone();
    // dropping a whole constraint also drops its value fragments
    for (id, kind) in &chosen {
        if *kind == OmittedKind::WholeConstraint {
            for e in &elements {
                if e.id.starts_with(&format!("{id}:")) {
                    with_children.insert(e.id.clone());
                }
            }
        }
    }
    let d_minus = render_with_omissions(w, seed, &with_children)?;

    let by_id: std::collections::BTreeMap<&str, &super::Element> =
        elements.iter().map(|e| (e.id.as_str(), e)).collect();
    let entries = chosen
        .iter()
        .map(|(id, kind)| {
            let mut keywords = by_id
                .get(id.as_str())
                .map(|e| e.keywords.clone())
                .unwrap_or_default();
            keywords.extend(tokenize(&value_text(w, id, seed)));
            keywords.sort();
            keywords.dedup();
            // drop bare numbers from keywords so values cannot be fished
            // out by echoing digits
            keywords.retain(|k| k.parse::<f64>().is_err() || k.len() <= 2);
            OmittedElement {
                element: id.clone(),
                kind: *kind,
                value_text: value_text(w, id, seed),
                keywords,
            }
        })
        .collect();
    Ok((d_minus, OmissionLedger { entries }))
}

/// Reply from the oracle: either a ledger entry's value sentence or a
/// no-match notice. `matched` names the ledger element that answered.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAnswer {
    pub text: String,
    pub matched: Option<String>,
}

/// Notice returned when a query names nothing in the ledger.
pub const NO_MATCH_NOTICE: &str = "No additional information is available for that request.";

/// Answer a clarification query by keyword match against the omission
/// ledger. Only omitted ground truth can ever be revealed; generic queries
/// and queries about present information earn a no-match notice.
pub fn oracle_answer(query: &str, w: &WorldDescriptor, ledger: &OmissionLedger) -> OracleAnswer {
    let _ = w;
    let tokens: BTreeSet<String> = tokenize(query).into_iter().collect();
    let mut best: Option<(usize, usize)> = None; // (score, entry index)
    for (i, entry) in ledger.entries.iter().enumerate() {
        let score = entry
            .keywords
            .iter()
            .filter(|k| tokens.contains(*k))
            .count();
        let better = match best {
            None => score >= 2,
            Some((s, _)) => score > s,
        };
        if better {
            best = Some((score, i));
        }
    }
    match best {
        Some((_, i)) => OracleAnswer {
            text: ledger.entries[i].value_text.clone(),
            matched: Some(ledger.entries[i].element.clone()),
        },
        None => OracleAnswer {
            text: NO_MATCH_NOTICE.to_string(),
            matched: None,
        },
    }
}

/// Restore every ledgered value into an incomplete description: value
/// sentences are appended and their manifest entries restored.
pub fn merge_ledger(
    d_minus: &Description,
    ledger: &OmissionLedger,
    w: &WorldDescriptor,
) -> Description {
    let mut out = d_minus.clone();
    let elements = elements_of(w);
    let mut sentences = split_sentences(&out.text);
    for entry in &ledger.entries {
        let idx = sentences.len();
        sentences.push(entry.value_text.clone());
        out.manifest
            .entry(entry.element.clone())
            .or_default()
            .push(idx);
        if entry.kind == OmittedKind::WholeConstraint {
            for e in &elements {
                if e.id.starts_with(&format!("{}:", entry.element)) {
                    out.manifest.entry(e.id.clone()).or_default().push(idx);
                }
            }
        }
    }
    out.text = sentences.join(" ");
    out
}
