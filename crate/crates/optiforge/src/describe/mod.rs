//! Natural-language descriptions of world descriptors: deterministic
//! rendering, component-wise verification, targeted omission for the
//! clarification setting, and the lookup oracle that answers queries about
//! omitted elements.
//!
//! Every description carries a coverage manifest mapping formulation
//! *elements* (objective coefficients, constraint coefficients and
//! right-hand sides, variable bounds, pump parameters) to the sentences
//! asserting them. Verification is strict when a manifest is present:
//! each element's literals must appear inside its own manifest sentences.
//! Free-form text with no manifest (external generators) gets a recovered
//! manifest by literal matching before the same checks run.

mod external;
mod omit;
mod render;
mod verify;

pub use external::{generate_description_external, HttpTextClient, TextClient};
pub use omit::{merge_ledger, omit, oracle_answer, OracleAnswer, NO_MATCH_NOTICE};
pub use render::render_description;
pub use verify::verify_description;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::problem::{Category, WorldDescriptor};
use crate::round2;

/// A rendered or externally produced description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Description {
    pub text: String,
    /// Element id -> indices of the sentences asserting it. Empty for
    /// free-form external text.
    pub manifest: BTreeMap<String, Vec<usize>>,
    /// Scenario label plus paraphrase variant id.
    pub style: StyleTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleTag {
    pub scenario: String,
    pub variant: u64,
}

/// Outcome of the five component-wise checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveCheckReport {
    pub data_values_present: bool,
    pub constraints_present: bool,
    pub objective_correct: bool,
    pub parameters_described: bool,
    pub self_consistent: bool,
    pub failures: Vec<String>,
}

impl FiveCheckReport {
    pub fn pass(&self) -> bool {
        self.data_values_present
            && self.constraints_present
            && self.objective_correct
            && self.parameters_described
            && self.self_consistent
    }
}

/// What kind of thing an omission removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmittedKind {
    Coefficient,
    Bound,
    WholeConstraint,
    Parameter,
}

/// One omitted element with its ground-truth value sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmittedElement {
    pub element: String,
    pub kind: OmittedKind,
    /// Full sentence restating the ground truth, served by the oracle.
    pub value_text: String,
    /// Lowercase tokens used to match clarification queries.
    pub keywords: Vec<String>,
}

/// The hidden record of what an incomplete description is missing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OmissionLedger {
    pub entries: Vec<OmittedElement>,
}

// ---------------------------------------------------------------------------
// element table
// ---------------------------------------------------------------------------

/// One verifiable unit of a formulation: an id, the numeric literals that
/// must appear where it is asserted, and the query keywords tied to it.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Element {
    pub id: String,
    pub literals: Vec<f64>,
    pub keywords: Vec<String>,
}

pub(crate) fn tokenize(s: &str) -> Vec<String> {
    s.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_string())
        .collect()
}

pub(crate) fn constraint_label(w: &WorldDescriptor, i: usize) -> String {
    w.metadata
        .constraint_labels
        .get(&i)
        .cloned()
        .unwrap_or_else(|| format!("requirement {}", i + 1))
}

/// Every element of `w` that verification tracks, in deterministic order.
pub(crate) fn elements_of(w: &WorldDescriptor) -> Vec<Element> {
    let mut out = Vec::new();
    let ir = &w.formulation;

    for (name, coeff) in &ir.objective.coeffs {
        if *coeff == 0.0 {
            continue;
        }
        let mut kw = tokenize(name);
        kw.extend(["objective".into(), "profit".into(), "cost".into()]);
        out.push(Element {
            id: format!("obj:coef:{name}"),
            literals: vec![coeff.abs()],
            keywords: kw,
        });
    }
    if ir.objective.offset != 0.0 {
        out.push(Element {
            id: "obj:offset".into(),
            literals: vec![ir.objective.offset.abs()],
            keywords: vec!["objective".into(), "fixed".into(), "offset".into()],
        });
    }

    for (i, c) in ir.constraints.iter().enumerate() {
        let label = constraint_label(w, i);
        let label_tokens = tokenize(&label);
        // presence element: no literal requirement of its own
        let mut kw = label_tokens.clone();
        kw.push("constraint".into());
        out.push(Element {
            id: format!("con:{i}"),
            literals: Vec::new(),
            keywords: kw,
        });
        for (name, coeff) in &c.coeffs {
            if *coeff == 0.0 {
                continue;
            }
            let mut kw = tokenize(name);
            kw.extend(label_tokens.clone());
            out.push(Element {
                id: format!("con:{i}:coef:{name}"),
                literals: vec![coeff.abs()],
                keywords: kw,
            });
        }
        let mut kw = label_tokens.clone();
        kw.extend(["limit".into(), "bound".into(), "requirement".into()]);
        out.push(Element {
            id: format!("con:{i}:rhs"),
            literals: vec![c.rhs.abs()],
            keywords: kw,
        });
    }

    if ir.category != Category::Pump {
        for v in &ir.variables {
            if v.lower != 0.0 {
                let mut kw = tokenize(&v.name);
                kw.extend(["minimum".into(), "lower".into()]);
                out.push(Element {
                    id: format!("var:{}:lower", v.name),
                    literals: vec![v.lower.abs()],
                    keywords: kw,
                });
            }
            if let Some(u) = v.upper {
                if v.domain != crate::problem::VarDomain::Binary {
                    let mut kw = tokenize(&v.name);
                    kw.extend(["maximum".into(), "cap".into(), "upper".into()]);
                    out.push(Element {
                        id: format!("var:{}:upper", v.name),
                        literals: vec![u.abs()],
                        keywords: kw,
                    });
                }
            }
        }
    }

    if let Some(inst) = &ir.pump {
        for (id, lit, words) in [
            ("pump:scalar:v_total", inst.v_total, "total flow flowrate"),
            (
                "pump:scalar:dp_total",
                inst.dp_total,
                "pressure rise target",
            ),
            ("pump:scalar:omega_max", inst.omega_max, "speed rpm maximum"),
            (
                "pump:scalar:series_max",
                inst.series_max as f64,
                "series pumps maximum",
            ),
            (
                "pump:scalar:parallel_max",
                inst.parallel_max as f64,
                "parallel lines maximum",
            ),
        ] {
            out.push(Element {
                id: id.into(),
                literals: vec![lit],
                keywords: tokenize(words),
            });
        }
        for (i, t) in inst.types.iter().enumerate() {
            let type_word = format!("{}", i + 1);
            for (field, value, words) in [
                ("p_max", t.p_max, "power cap rating"),
                ("fixed_cost", t.fixed_cost, "base fixed cost"),
                ("power_cost", t.power_cost, "power operating cost"),
                ("m1", t.m1, "m1 power curve"),
                ("m2", t.m2, "m2 power curve"),
                ("m3", t.m3, "m3 power curve"),
                ("m4", t.m4, "m4 pressure curve"),
                ("m5", t.m5, "m5 pressure curve"),
                ("m6", t.m6, "m6 pressure curve"),
            ] {
                let mut kw = tokenize(words);
                kw.push("pump".into());
                kw.push("type".into());
                kw.push(type_word.clone());
                out.push(Element {
                    id: format!("pump:type:{i}:{field}"),
                    literals: vec![value],
                    keywords: kw,
                });
            }
        }
    }

    out
}

/// Format a number for prose: integers plainly, fractions with their
/// shortest representation.
pub(crate) fn fmt_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Split rendered text into sentences. Boundaries are sentence punctuation
/// followed by a space or end-of-text, which never occurs inside numeric
/// literals.
pub fn split_sentences(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut start = 0usize;
    for i in 0..bytes.len() {
        let boundary = matches!(bytes[i], b'.' | b'?' | b'!');
        if boundary && (i + 1 == bytes.len() || bytes[i + 1] == b' ') {
            let s = text[start..=i].trim();
            if !s.is_empty() {
                out.push(s.to_string());
            }
            start = i + 1;
        }
    }
    let tail = text[start.min(text.len())..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

/// Pull every numeric literal out of a piece of text, accepting comma
/// grouping ("2,000") and trailing punctuation.
pub(crate) fn extract_literals(text: &str) -> Vec<f64> {
    let mut out = Vec::new();
    let mut token = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_ascii_digit() {
            token.push(c);
        } else if (c == '.' || c == ',') && !token.is_empty() {
            // keep only if followed by a digit (decimal point or grouping)
            if chars.peek().is_some_and(|n| n.is_ascii_digit()) {
                if c == '.' {
                    token.push('.');
                }
            } else {
                flush(&mut token, &mut out);
            }
        } else {
            flush(&mut token, &mut out);
        }
    }
    flush(&mut token, &mut out);
    return out;

    fn flush(token: &mut String, out: &mut Vec<f64>) {
        if !token.is_empty() {
            if let Ok(v) = token.parse::<f64>() {
                out.push(v);
            }
            token.clear();
        }
    }
}

/// Two-decimal textual matching of literals.
pub(crate) fn literal_matches(expected: f64, found: f64) -> bool {
    (round2(expected) - round2(found)).abs() < 5e-9
}
