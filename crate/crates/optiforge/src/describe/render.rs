//! Deterministic prose renderer. Every numeric fact of the formulation is
//! written into a sentence and recorded in the coverage manifest; paraphrase
//! variants change the wording, never the covered element set. Sentences are
//! assembled from per-element fragments so the omission operator can drop a
//! single value without disturbing the rest.

use std::collections::{BTreeMap, BTreeSet};

use crate::problem::{Category, Comparator, Sense, VarDomain, WorldDescriptor};
use crate::{Error, Result};

use super::{constraint_label, fmt_num, Description, StyleTag};

struct Builder {
    sentences: Vec<String>,
    manifest: BTreeMap<String, Vec<usize>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            sentences: Vec::new(),
            manifest: BTreeMap::new(),
        }
    }

    fn push(&mut self, sentence: String, elements: &[String]) {
        let idx = self.sentences.len();
        self.sentences.push(sentence);
        for el in elements {
            self.manifest.entry(el.clone()).or_default().push(idx);
        }
    }
}

fn pick(style: u64, salt: u64, n: u64) -> u64 {
    let mut z = style
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z ^= z >> 29;
    z % n
}

fn signed_amount(v: f64) -> String {
    if v < 0.0 {
        format!("minus {}", fmt_num(v.abs()))
    } else {
        fmt_num(v)
    }
}

/// Prose term list of a linear expression; omitted coefficients keep the
/// variable mention but lose the number.
fn term_list(
    coeffs: &BTreeMap<String, f64>,
    element_prefix: &str,
    omitted: &BTreeSet<String>,
) -> (String, Vec<String>) {
    let mut parts: Vec<String> = Vec::new();
    let mut elements = Vec::new();
    for (name, coeff) in coeffs {
        if *coeff == 0.0 {
            continue;
        }
        let element = format!("{element_prefix}{name}");
        let connector = if parts.is_empty() {
            if *coeff < 0.0 {
                "minus "
            } else {
                ""
            }
        } else if *coeff < 0.0 {
            "minus "
        } else {
            "plus "
        };
        if omitted.contains(&element) {
            parts.push(format!("{connector}{name}"));
        } else {
            parts.push(format!("{connector}{} times {name}", fmt_num(coeff.abs())));
            elements.push(element);
        }
    }
    let text = if parts.is_empty() {
        "nothing".to_string()
    } else {
        parts.join(" ")
    };
    (text, elements)
}

/// Produce the deterministic natural-language description of a descriptor.
pub fn render_description(w: &WorldDescriptor, style_seed: u64) -> Result<Description> {
    render_with_omissions(w, style_seed, &BTreeSet::new())
}

/// Render with a set of element ids withheld from the prose and manifest.
/// Whole-constraint omissions drop the sentence; value omissions drop only
/// the numeric fragment.
pub(crate) fn render_with_omissions(
    w: &WorldDescriptor,
    style_seed: u64,
    omitted: &BTreeSet<String>,
) -> Result<Description> {
    let report = crate::problem::validate_descriptor(w);
    if !report.feasible {
        return Err(Error::InvalidIr(format!(
            "descriptor failed validation: {}",
            report.messages.join("; ")
        )));
    }
    let mut b = Builder::new();
    let scenario = if w.metadata.scenario.is_empty() {
        "planning".to_string()
    } else {
        w.metadata.scenario.clone()
    };

    let intro = match pick(style_seed, 1, 3) {
        0 => {
            format!("In this {scenario} scenario, a planning team must set each decision quantity.")
        }
        1 => format!("A {scenario} operation is looking for the best possible plan."),
        _ => format!(
            "Consider a {scenario} problem in which several operating quantities must be chosen."
        ),
    };
    b.push(intro, &[]);

    if w.formulation.category == Category::Pump {
        render_pump(w, style_seed, omitted, &mut b)?;
    } else {
        render_linear(w, style_seed, omitted, &mut b);
    }

    let closing = match pick(style_seed, 99, 2) {
        0 => "What is the best achievable plan?".to_string(),
        _ => "Determine the best feasible choice of every quantity.".to_string(),
    };
    b.push(closing, &[]);

    Ok(Description {
        text: b.sentences.join(" "),
        manifest: b.manifest,
        style: StyleTag {
            scenario,
            variant: style_seed,
        },
    })
}

fn render_linear(w: &WorldDescriptor, style: u64, omitted: &BTreeSet<String>, b: &mut Builder) {
    let ir = &w.formulation;

    for v in &ir.variables {
        let unit = w
            .metadata
            .units
            .get(&v.name)
            .cloned()
            .unwrap_or_else(|| "units".into());
        let role = w.metadata.roles.get(&v.name);
        let mut sentence = match pick(style, 7 + v.name.len() as u64, 2) {
            0 => format!("The quantity {} is measured in {unit}", v.name),
            _ => format!("Decision {} is tracked in {unit}", v.name),
        };
        if let Some(r) = role {
            sentence.push_str(&format!(" and acts as a {r}"));
        }
        match v.domain {
            VarDomain::Binary => sentence.push_str(" and is a yes-or-no choice"),
            VarDomain::Integer => sentence.push_str(" and must be a whole number"),
            VarDomain::Continuous => {}
        }
        let mut elements = Vec::new();
        if v.lower != 0.0 {
            let el = format!("var:{}:lower", v.name);
            if !omitted.contains(&el) {
                sentence.push_str(&format!(", at least {}", signed_amount(v.lower)));
                elements.push(el);
            }
        }
        if let Some(u) = v.upper {
            if v.domain != VarDomain::Binary {
                let el = format!("var:{}:upper", v.name);
                if !omitted.contains(&el) {
                    sentence.push_str(&format!(", at most {}", fmt_num(u)));
                    elements.push(el);
                }
            }
        }
        sentence.push('.');
        b.push(sentence, &elements);
    }

    // objective
    let sense_word = match ir.objective.sense {
        Sense::Max => "maximize",
        Sense::Min => "minimize",
    };
    let value_word = match ir.objective.sense {
        Sense::Max => "payoff",
        Sense::Min => "expense",
    };
    let (terms, mut elements) = term_list(&ir.objective.coeffs, "obj:coef:", omitted);
    let mut sentence = match pick(style, 13, 2) {
        0 => format!("The goal is to {sense_word} the total {value_word}, computed as {terms}"),
        _ => format!("Management wants to {sense_word} the overall {value_word}, namely {terms}"),
    };
    if ir.objective.offset != 0.0 && !omitted.contains("obj:offset") {
        sentence.push_str(&format!(
            " plus a fixed term of {}",
            signed_amount(ir.objective.offset)
        ));
        elements.push("obj:offset".into());
    }
    sentence.push('.');
    b.push(sentence, &elements);

    // constraints
    for (i, c) in ir.constraints.iter().enumerate() {
        let presence = format!("con:{i}");
        if omitted.contains(&presence) {
            continue;
        }
        let label = constraint_label(w, i);
        let relation = match (c.cmp, pick(style, 17 + i as u64, 2)) {
            (Comparator::Le, 0) => "can be at most",
            (Comparator::Le, _) => "must not exceed",
            (Comparator::Ge, 0) => "must be at least",
            (Comparator::Ge, _) => "has to reach at least",
            (Comparator::Eq, 0) => "must equal exactly",
            (Comparator::Eq, _) => "is fixed at exactly",
        };
        let (terms, mut elements) = term_list(&c.coeffs, &format!("con:{i}:coef:"), omitted);
        elements.insert(0, presence);
        let rhs_el = format!("con:{i}:rhs");
        let sentence = if omitted.contains(&rhs_el) {
            format!("Regarding {label}: {terms} {relation} an agreed threshold.")
        } else {
            elements.push(rhs_el);
            format!(
                "Regarding {label}: {terms} {relation} {}.",
                signed_amount(c.rhs)
            )
        };
        b.push(sentence, &elements);
    }
}

fn render_pump(
    w: &WorldDescriptor,
    style: u64,
    omitted: &BTreeSet<String>,
    b: &mut Builder,
) -> Result<()> {
    let inst = w
        .formulation
        .pump
        .as_ref()
        .ok_or_else(|| Error::InvalidIr("pump formulation lacks pump data".into()))?;

    // operating targets assembled from per-scalar fragments
    let scalar_fragments: [(&str, String); 5] = [
        (
            "pump:scalar:v_total",
            format!("a total flowrate of {} units", fmt_num(inst.v_total)),
        ),
        (
            "pump:scalar:dp_total",
            format!("a total pressure rise of {} units", fmt_num(inst.dp_total)),
        ),
        (
            "pump:scalar:omega_max",
            format!("a speed ceiling of {} RPM", fmt_num(inst.omega_max)),
        ),
        (
            "pump:scalar:series_max",
            format!("at most {} pumps in series per type", inst.series_max),
        ),
        (
            "pump:scalar:parallel_max",
            format!("at most {} parallel lines per type", inst.parallel_max),
        ),
    ];
    let mut kept = Vec::new();
    let mut elements = Vec::new();
    for (el, frag) in scalar_fragments.iter() {
        if !omitted.contains(*el) {
            kept.push(frag.clone());
            elements.push(el.to_string());
        }
    }
    let lead = match pick(style, 23, 2) {
        0 => "The network must satisfy",
        _ => "Operating targets require",
    };
    b.push(format!("{lead} {}.", kept.join(", ")), &elements);

    b.push(
        "For every pump, power equals m1 times the cubed speed ratio plus m2 times the squared \
         speed ratio times flow minus m3 times the speed ratio times squared flow, while the \
         pressure rise equals m4 times the speed ratio times flow plus m5 times the squared \
         speed ratio minus m6 times squared flow."
            .to_string(),
        &[],
    );
    b.push(
        "Binary switches select the active types, integer counts fix the series and parallel \
         arrangement, each active type must deliver the full pressure rise through its series \
         stages, and the flow fractions across active types sum to one."
            .to_string(),
        &[],
    );

    for (i, t) in inst.types.iter().enumerate() {
        let fields: [(&str, String); 9] = [
            ("m1", format!("m1 {}", fmt_num(t.m1))),
            ("m2", format!("m2 {}", fmt_num(t.m2))),
            ("m3", format!("m3 {}", fmt_num(t.m3))),
            ("m4", format!("m4 {}", fmt_num(t.m4))),
            ("m5", format!("m5 {}", fmt_num(t.m5))),
            ("m6", format!("m6 {}", fmt_num(t.m6))),
            ("p_max", format!("a power cap of {}", fmt_num(t.p_max))),
            (
                "fixed_cost",
                format!("a base cost of {}", fmt_num(t.fixed_cost)),
            ),
            (
                "power_cost",
                format!("a power cost of {}", fmt_num(t.power_cost)),
            ),
        ];
        let mut kept = Vec::new();
        let mut elements = Vec::new();
        for (field, frag) in fields.iter() {
            let el = format!("pump:type:{i}:{field}");
            if !omitted.contains(&el) {
                kept.push(frag.clone());
                elements.push(el);
            }
        }
        let lead = match pick(style, 31 + i as u64, 2) {
            0 => format!("Pump type {} is characterized by", i + 1),
            _ => format!("The data sheet of pump type {} lists", i + 1),
        };
        b.push(format!("{lead} {}.", kept.join(", ")), &elements);
    }

    let obj = match pick(style, 41, 2) {
        0 => "The objective is to minimize the total cost, the sum over active types of the base cost plus the power cost times power, multiplied by the number of installed pumps.",
        _ => "Costs must be minimized: each installed pump contributes its base cost plus its power cost times the power it draws.",
    };
    b.push(obj.to_string(), &[]);
    Ok(())
}
