//! Machine-readable renderings of solver and checker results, for
//! `--format doc`. Big integers and rationals are strings; floats are
//! rendered with a fixed number of digits and also kept as strings.

use serde_json::{json, Map, Value};

use super::doc::{certificate_doc, DOC_VERSION};
use crate::analysis::{DecompositionClash, FuzzSummary, GapReport, LemmaReport, Violation};
use crate::reductions::{CertValue, GapCertificate};
use crate::solvers::{ObjectiveValue, OptResult};

fn document(kind: &str, mut body: Map<String, Value>) -> Value {
    body.insert("document".into(), json!(kind));
    body.insert("version".into(), json!(DOC_VERSION));
    Value::Object(body)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("built from json!({{..}})"),
    }
}

pub fn value_doc(value: &ObjectiveValue) -> Value {
    match value {
        ObjectiveValue::Nash(s) => {
            let mut m = object(json!({
                "objective": "nsw",
                "zero_agents": s.zero_count(),
                "product": s.product().to_string(),
                "geometric_mean": format!("{:.10}", s.geometric_mean()),
            }));
            if let Some(g) = s.exact_geometric_mean() {
                m.insert("exact_geometric_mean".into(), json!(g.to_string()));
            }
            Value::Object(m)
        }
        ObjectiveValue::Egalitarian(v) => json!({"objective": "mew", "welfare": v}),
    }
}

fn cert_value_doc(v: &CertValue) -> Value {
    match v {
        CertValue::Nash(p) => json!({"expression": p.to_string(), "approx": format!("{:.10}", p.approx())}),
        CertValue::Egalitarian(x) => json!({"welfare": x}),
    }
}

pub fn solve_doc(result: &OptResult, method: &str, utilities: &[i64]) -> Value {
    document(
        "solve",
        object(json!({
            "method": method,
            "status": result.status.to_string(),
            "nodes": result.nodes,
            "value": value_doc(&result.value),
            "allocation": result.allocation.assignment(),
            "utilities": utilities,
        })),
    )
}

pub fn gap_doc(report: &GapReport) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), json!(report.verdict.name()));
    m.insert("notes".into(), json!(report.notes));
    if let Some(fw) = &report.forward {
        m.insert(
            "forward".into(),
            json!({
                "allocation": fw.allocation.assignment(),
                "utilities": fw.utilities,
                "value": value_doc(&fw.value),
                "yes_value": cert_value_doc(&fw.yes_value),
                "holds": fw.holds,
            }),
        );
    }
    if let Some(bw) = &report.backward {
        m.insert(
            "backward".into(),
            json!({
                "status": bw.optimum.status.to_string(),
                "nodes": bw.optimum.nodes,
                "optimum": value_doc(&bw.optimum.value),
                "allocation": bw.optimum.allocation.assignment(),
                "no_bound": cert_value_doc(&bw.bound),
                "holds": bw.holds,
            }),
        );
    }
    document("gap", m)
}

pub fn violation_doc(v: &Violation) -> Value {
    let mut m = object(json!({"kind": v.kind.name(), "s": v.s, "o": v.o, "values": v.values}));
    if let Some(t) = &v.t {
        m.insert("t".into(), json!(t));
    }
    if let Some(o2) = v.o2 {
        m.insert("o2".into(), json!(o2));
    }
    Value::Object(m)
}

/// A check result: the property, the subject, and the violations found.
pub fn check_doc(property: &str, subject: &str, violations: &[Violation]) -> Value {
    document(
        "check",
        object(json!({
            "property": property,
            "subject": subject,
            "holds": violations.is_empty(),
            "violation_count": violations.len(),
            "violations": violations.iter().map(violation_doc).collect::<Vec<_>>(),
        })),
    )
}

pub fn decomposition_doc(c: i64, clash: Option<&DecompositionClash>) -> Value {
    let mut m = object(json!({"property": "decomposition", "c": c, "holds": clash.is_none()}));
    if let Some(cl) = clash {
        let pairs: Vec<[i64; 2]> = cl.pairs.iter().map(|&(x, y)| [x, y]).collect();
        m.insert("clash".into(), json!({"sum": cl.sum, "pairs": pairs}));
    }
    document("check", m)
}

pub fn lemma_doc(report: &LemmaReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "statement": c.statement,
                "lhs": c.lhs.to_string(),
                "rhs": c.rhs.to_string(),
                "strict": c.strict,
                "holds": c.holds,
            })
        })
        .collect();
    document(
        "check",
        object(json!({
            "property": "lemmas",
            "values": report.values,
            "regime": report.regime.name(),
            "holds": report.passed(),
            "checks": checks,
        })),
    )
}

pub fn bounds_doc(cert: &GapCertificate) -> Value {
    let mut m = object(certificate_doc(cert));
    m.insert("consistent".into(), json!(cert.is_consistent()));
    document("bounds", m)
}

pub fn fuzz_doc(summary: &FuzzSummary) -> Value {
    let ds: Vec<Value> = summary
        .discrepancies
        .iter()
        .map(|d| json!({"trial": d.trial, "trial_seed": d.trial_seed.to_string(), "check": d.check, "detail": d.detail}))
        .collect();
    document(
        "fuzz",
        object(json!({
            "seed": summary.seed.to_string(),
            "trials": summary.trials,
            "nsw_trials": summary.nsw_trials,
            "discrepancies": ds,
        })),
    )
}
