//! JSON and text renderings of reports. The JSON schema carries
//! `format_version`; keys are emitted in sorted order.

use serde_json::{json, Value};

use crate::deform::HarnessReport;
use crate::kan::{CheckReport, IndexResult};
use crate::templicial::{ValidationReport, Violation};

use super::format::FORMAT_VERSION;

/// How many failing indices a text report lists before summarizing.
const TEXT_FAILURES: usize = 20;

fn index_json(r: &IndexResult) -> Value {
    json!({
        "hom": r.hom.as_ref().map(|(a, b)| vec![a.clone(), b.clone()]),
        "n": r.n,
        "j": r.j,
        "passed": r.passed,
        "cokernel": r.cokernel.as_ref().map(|c| c.to_string()),
        "witness": r.witness,
    })
}

pub fn check_json(r: &CheckReport) -> Value {
    json!({
        "property": r.property,
        "verdict": r.verdict.to_string(),
        "checked": r.results.len(),
        "failures": r.failures().count(),
        "results": r.results.iter().map(index_json).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

fn violation_json(v: &Violation) -> Value {
    json!({
        "identity": v.identity,
        "hom": v.hom.as_ref().map(|(a, b)| vec![a.clone(), b.clone()]),
        "entries": v.entries.iter().map(|(r, c, x, y)| json!({"row": r, "col": c, "lhs": x, "rhs": y})).collect::<Vec<_>>(),
    })
}

pub fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "property": "validate",
        "verdict": if r.passed() { "pass" } else { "fail" },
        "checked": r.checks,
        "violations": r.violations.iter().map(violation_json).collect::<Vec<_>>(),
    })
}

pub fn harness_json(r: &HarnessReport) -> Value {
    json!({
        "theorem": r.theorem,
        "outcome": r.outcome.to_string(),
        "hypotheses": r.hypotheses.iter().map(check_json).collect::<Vec<_>>(),
        "conclusion": r.conclusion.as_ref().map(check_json),
        "diagnostics": r.diagnostics.iter().map(check_json).collect::<Vec<_>>(),
        "first_failure": r.first_failure().map(|(p, i)| json!({"property": p, "at": index_json(i)})),
    })
}

/// Wrap a report body with the schema header.
pub fn envelope(command: &str, input: Option<&str>, body: Value) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "command": command,
        "input": input,
        "report": body,
    })
}

pub fn check_text(r: &CheckReport) -> String {
    let fails: Vec<&IndexResult> = r.failures().collect();
    let mut s = format!("{}: {} ({} indices checked, {} failing)\n", r.property, r.verdict, r.results.len(), fails.len());
    for f in fails.iter().take(TEXT_FAILURES) {
        s += &format!("  {f}\n");
    }
    if fails.len() > TEXT_FAILURES {
        s += &format!("  ... {} more\n", fails.len() - TEXT_FAILURES);
    }
    for n in &r.notes {
        s += &format!("  note: {n}\n");
    }
    s
}

pub fn validation_text(r: &ValidationReport) -> String {
    let mut s = format!(
        "validate: {} ({} identities checked, {} violated)\n",
        if r.passed() { "pass" } else { "fail" },
        r.checks,
        r.violations.len()
    );
    for v in r.violations.iter().take(TEXT_FAILURES) {
        s += &format!("  {v}\n");
    }
    s
}

pub fn harness_text(r: &HarnessReport) -> String {
    let mut s = format!("{}: {}\n", r.theorem, r.outcome);
    let mut section = |title: &str, reps: &[&CheckReport]| {
        for c in reps {
            s += &format!("{title} ");
            s += &check_text(c);
        }
    };
    section("hypothesis", &r.hypotheses.iter().collect::<Vec<_>>());
    section("conclusion", &r.conclusion.iter().collect::<Vec<_>>());
    section("diagnostic", &r.diagnostics.iter().collect::<Vec<_>>());
    if let Some((p, i)) = r.first_failure() {
        s += &format!("first failure: {p} {i}\n");
    }
    s
}
