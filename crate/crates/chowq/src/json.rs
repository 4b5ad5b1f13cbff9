//! JSON forms of polynomials, ring elements, presentations and reports.
//!
//! Key order is fixed and terms follow the canonical monomial order, so the
//! output is byte-stable.

use chowq_core::verify::{ParamValue, Report};
use chowq_core::{Polynomial, RingElement, RingPresentation};
use serde_json::{json, Map, Value};

pub fn polynomial(p: &Polynomial) -> Value {
    Value::Array(
        p.ordered_terms()
            .into_iter()
            .map(|(m, c)| json!({ "exps": m.exps(), "coeff": c.to_string() }))
            .collect(),
    )
}

pub fn ring_header(ring: &RingPresentation, point: bool) -> Value {
    let kind = ring.kind();
    let mut v = json!({ "kind": kind.name(), "n": kind.n() });
    if point && !kind.name().starts_with("quadric_point") {
        v["point"] = Value::Bool(true);
    }
    v
}

pub fn element(e: &RingElement, point: bool) -> Value {
    let fiber = e.ring().fiber_table();
    let terms: Vec<Value> = e
        .ordered_terms()
        .into_iter()
        .map(|(m, c)| {
            let basis: Map<String, Value> =
                fiber.names().iter().zip(m.exps()).map(|(name, &x)| (name.clone(), Value::from(x))).collect();
            json!({ "basis": basis, "coeff": polynomial(c) })
        })
        .collect();
    json!({ "ring": ring_header(e.ring(), point), "terms": terms })
}

pub fn presentation(ring: &RingPresentation, point: bool) -> Value {
    let gens = |t: &chowq_core::GeneratorTable| -> Vec<Value> {
        (0..t.len()).map(|i| json!({ "name": t.name(i), "degree": t.degree(i) })).collect()
    };
    let fiber = ring.fiber_table();
    let named: Vec<Value> =
        ring.aliases().iter().map(|(name, p)| json!({ "name": name, "value": p.to_string() })).collect();
    let rules: Vec<Value> = ring
        .rules()
        .iter()
        .map(|r| json!({ "lhs": r.lhs.text(fiber), "rhs": r.rhs.to_string() }))
        .collect();
    let relations: Vec<Value> =
        ring.relations().iter().map(|(label, p)| json!({ "label": label, "value": p.to_string() })).collect();
    let basis: Vec<Value> = ring.basis().iter().map(|m| Value::from(m.text(fiber))).collect();
    let pushforward = match ring.pushforward_data() {
        Some(data) => Value::Array(
            data.iter().map(|(m, img)| json!({ "basis": m.text(fiber), "image": img.to_string() })).collect(),
        ),
        None => Value::Null,
    };
    json!({
        "ring": ring_header(ring, point),
        "coefficients": ring.coeff_kind().name(),
        "fiber_generators": gens(fiber),
        "base_generators": gens(ring.base_table()),
        "named_elements": named,
        "rules": rules,
        "relations": relations,
        "basis": basis,
        "pushforward": pushforward,
    })
}

pub fn report(r: &Report) -> Value {
    let params: Map<String, Value> = r
        .params
        .iter()
        .map(|(k, v)| {
            let v = match v {
                ParamValue::Int(i) => Value::from(*i),
                ParamValue::Text(s) => Value::from(s.clone()),
                ParamValue::Set(s) => Value::from(s.clone()),
            };
            (k.clone(), v)
        })
        .collect();
    let residuals: Vec<Value> = r
        .residuals
        .iter()
        .map(|x| json!({ "label": x.label, "degree": x.degree, "value": x.value }))
        .collect();
    json!({
        "check": r.check,
        "params": params,
        "status": r.status.label(),
        "residuals": residuals,
        "witness": r.witness,
        "notes": r.notes,
    })
}

/// Pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
