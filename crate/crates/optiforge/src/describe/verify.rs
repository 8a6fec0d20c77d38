//! Offline component-wise verification of a description against its world
//! descriptor: five checks over numeric literals, constraint coverage, the
//! objective statement, pump parameters, and manifest self-consistency.

use std::collections::BTreeMap;

use crate::problem::{Category, Sense, WorldDescriptor};

use super::{
    elements_of, extract_literals, literal_matches, split_sentences, Description, Element,
    FiveCheckReport,
};

/// Run the five checks. Descriptions carrying a manifest are verified
/// strictly against it; manifest-free text (external generators) first gets
/// a manifest recovered by literal matching, so a faithful free-form
/// rendition can still pass.
pub fn verify_description(d: &Description, w: &WorldDescriptor) -> FiveCheckReport {
    let sentences = split_sentences(&d.text);
    let sentence_literals: Vec<Vec<f64>> = sentences.iter().map(|s| extract_literals(s)).collect();
    let text_literals: Vec<f64> = sentence_literals.iter().flatten().copied().collect();
    let elements = elements_of(w);

    let manifest = if d.manifest.is_empty() {
        recover_manifest(&elements, &sentence_literals)
    } else {
        d.manifest.clone()
    };

    let mut failures = Vec::new();

    let covered = |e: &Element| -> bool {
        match manifest.get(&e.id) {
            Some(idxs) if !idxs.is_empty() => idxs.iter().any(|&i| {
                sentence_literals.get(i).is_some_and(|lits| {
                    e.literals
                        .iter()
                        .all(|v| lits.iter().any(|l| literal_matches(*v, *l)))
                })
            }),
            _ => false,
        }
    };

    // check 1: every numeric parameter appears, and where a manifest entry
    // exists it must actually assert the value
    let mut data_values_present = true;
    for e in &elements {
        if e.literals.is_empty() {
            continue;
        }
        for v in &e.literals {
            if !text_literals.iter().any(|l| literal_matches(*v, *l)) {
                data_values_present = false;
                failures.push(format!("check1: literal {v} of {} missing from text", e.id));
            }
        }
        if !covered(e) {
            data_values_present = false;
            failures.push(format!(
                "check1: element {} has no asserting sentence",
                e.id
            ));
        }
    }

    // check 2: every constraint is present in the coverage manifest
    let mut constraints_present = true;
    for i in 0..w.formulation.constraints.len() {
        let id = format!("con:{i}");
        let ok = manifest
            .get(&id)
            .is_some_and(|idxs| idxs.iter().any(|&k| k < sentences.len()));
        if !ok {
            constraints_present = false;
            failures.push(format!("check2: constraint {i} is not described"));
        }
    }

    // check 3: objective sense keyword plus objective coefficients
    let lower = d.text.to_lowercase();
    let sense_ok = match w.formulation.objective.sense {
        Sense::Max => lower.contains("maximiz") || lower.contains("highest possible"),
        Sense::Min => lower.contains("minimiz") || lower.contains("lowest possible"),
    };
    let mut objective_correct = sense_ok;
    if !sense_ok {
        failures.push("check3: objective sense keyword missing".into());
    }
    for (name, coeff) in &w.formulation.objective.coeffs {
        if *coeff == 0.0 {
            continue;
        }
        if !text_literals
            .iter()
            .any(|l| literal_matches(coeff.abs(), *l))
        {
            objective_correct = false;
            failures.push(format!("check3: objective coefficient for {name} missing"));
        }
    }

    // check 4: pump scalars, per-type coefficients, and the governing
    // relations must all be described
    let mut parameters_described = true;
    if w.formulation.category == Category::Pump {
        for e in elements.iter().filter(|e| e.id.starts_with("pump:")) {
            if !covered(e) {
                parameters_described = false;
                failures.push(format!("check4: pump parameter {} not described", e.id));
            }
        }
        for word in ["power", "pressure"] {
            if !lower.contains(word) {
                parameters_described = false;
                failures.push(format!(
                    "check4: governing relation keyword `{word}` missing"
                ));
            }
        }
    }

    // check 5: manifest entries must point at real sentences and no
    // asserting sentence may contradict its element's value
    let mut self_consistent = true;
    let by_id: BTreeMap<&str, &Element> = elements.iter().map(|e| (e.id.as_str(), e)).collect();
    for (id, idxs) in &manifest {
        for &k in idxs {
            if k >= sentences.len() {
                self_consistent = false;
                failures.push(format!("check5: {id} points at missing sentence {k}"));
                continue;
            }
            if let Some(e) = by_id.get(id.as_str()) {
                let lits = &sentence_literals[k];
                let all_present = e
                    .literals
                    .iter()
                    .all(|v| lits.iter().any(|l| literal_matches(*v, *l)));
                if !all_present && !lits.is_empty() {
                    self_consistent = false;
                    failures.push(format!(
                        "check5: sentence {k} asserts {id} but carries a different value"
                    ));
                }
            }
        }
    }

    FiveCheckReport {
        data_values_present,
        constraints_present,
        objective_correct,
        parameters_described,
        self_consistent,
        failures,
    }
}

/// Best-effort manifest for free-form text: an element is assigned to the
/// sentences containing all of its literals; constraint presence requires a
/// sentence carrying every literal of the whole row.
fn recover_manifest(
    elements: &[Element],
    sentence_literals: &[Vec<f64>],
) -> BTreeMap<String, Vec<usize>> {
    let mut manifest: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    // group literals per constraint for the presence elements
    let mut row_literals: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for e in elements {
        if let Some(rest) = e.id.strip_prefix("con:") {
            if let Some((idx, _)) = rest.split_once(':') {
                row_literals
                    .entry(format!("con:{idx}"))
                    .or_default()
                    .extend(e.literals.iter().copied());
            }
        }
    }
    for e in elements {
        let required: &[f64] = if e.literals.is_empty() {
            match row_literals.get(&e.id) {
                Some(lits) => lits,
                None => continue,
            }
        } else {
            &e.literals
        };
        if required.is_empty() {
            continue;
        }
        let hits: Vec<usize> = sentence_literals
            .iter()
            .enumerate()
            .filter(|(_, lits)| {
                required
                    .iter()
                    .all(|v| lits.iter().any(|l| literal_matches(*v, *l)))
            })
            .map(|(i, _)| i)
            .collect();
        if !hits.is_empty() {
            manifest.insert(e.id.clone(), hits);
        }
    }
    manifest
}
