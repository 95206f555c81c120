//! JSON views of the library's report types. Field order is fixed and all
//! arrays are sorted, so identical inputs produce identical bytes.

use serde_json::{json, Map, Value};
use wdrd_core::{
    ClassificationReport, IntersectionTensor, NecessityComparison, ProductVerdict,
    SufficiencyCheck, TheoremVerdict, VerdictMode,
};

fn label_value(label: (u32, u32)) -> Value {
    json!([label.0, label.1])
}

fn label_key(label: (u32, u32)) -> String {
    format!("({},{})", label.0, label.1)
}

/// Tensor dump: `labels` sorted lexicographically, `valencies` keyed by
/// label, `p` holding the nonzero constants in lexicographic (h,i,j) order.
pub fn tensor_json(t: &IntersectionTensor) -> Value {
    let labels: Vec<Value> = t.labels().iter().map(|&l| label_value(l)).collect();
    let mut valencies = Map::new();
    for (i, &l) in t.labels().iter().enumerate() {
        valencies.insert(label_key(l), json!(t.valency(i)));
    }
    let mut p = Vec::new();
    let nl = t.num_labels();
    for h in 0..nl {
        for i in 0..nl {
            for j in 0..nl {
                let value = t.p(h, i, j);
                if value != 0 {
                    p.push(json!({
                        "h": label_value(t.labels()[h]),
                        "i": label_value(t.labels()[i]),
                        "j": label_value(t.labels()[j]),
                        "value": value,
                    }));
                }
            }
        }
    }
    json!({
        "labels": labels,
        "valencies": valencies,
        "p": p,
        "commutative": t.commutative(),
    })
}

/// Names of the pruning counters, in the report's fixed order.
pub const PRUNE_NAMES: [&str; 4] = [
    "regular-degrees",
    "forbid-improper-none",
    "arc-type-q2",
    "line-local",
];

pub fn pruned_json(report: &ClassificationReport) -> Value {
    json!({
        PRUNE_NAMES[0]: report.pruned.regular_degrees,
        PRUNE_NAMES[1]: report.pruned.forbid_improper_none,
        PRUNE_NAMES[2]: report.pruned.arc_type_q2,
        PRUNE_NAMES[3]: report.pruned.line_local,
    })
}

/// Search report. `config` echoes the requested flags; `proper_classes`
/// carries one entry per isomorphism class with its representative's arcs.
pub fn search_report_json(base: &str, config: Value, report: &ClassificationReport) -> Value {
    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|class| {
            let arcs: Vec<Value> = class
                .representative
                .digraph
                .arcs()
                .into_iter()
                .map(|(u, v)| json!([u, v]))
                .collect();
            json!({
                "arcs": arcs,
                "tensor": tensor_json(&class.representative.tensor),
                "commutative": class.representative.commutative,
                "members": class.members,
            })
        })
        .collect();
    json!({
        "base": base,
        "config": config,
        "total_visited": report.total_visited,
        "pruned": pruned_json(report),
        "undirected_solutions": report.undirected_solutions,
        "proper_classes": classes,
        "complete": report.complete,
    })
}

fn sufficiency_json(checks: &[SufficiencyCheck]) -> Value {
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "expected": c.expected_index,
                "wdrd": c.wdrd,
                "commutative": c.commutative,
                "underlying_matches_base": c.underlying_matches_base,
            })
        })
        .collect();
    Value::Array(rows)
}

fn comparison_json(c: &NecessityComparison) -> Value {
    json!({
        "matched": c.matched.iter().map(|&(class, exp)| json!([class, exp])).collect::<Vec<_>>(),
        "missing": c.missing,
        "unexpected": c.unexpected,
    })
}

pub fn theorem_verdict_json(base: &str, verdict: &TheoremVerdict, config: Value) -> Value {
    let mode = match verdict.mode {
        VerdictMode::SufficiencyOnly => "sufficiency-only",
        VerdictMode::Necessity => "necessity",
    };
    json!({
        "base": base,
        "mode": mode,
        "pass": verdict.pass,
        "truncated": verdict.truncated,
        "sufficiency": sufficiency_json(&verdict.sufficiency),
        "comparison": verdict.comparison.as_ref().map(comparison_json),
        "notes": verdict.notes,
        "search": verdict.report.as_ref().map(|r| {
            search_report_json(base, config.clone(), r)
        }),
    })
}

pub fn product_verdict_json(verdict: &ProductVerdict) -> Value {
    json!({
        "pass": true,
        "pairs_checked": verdict.pairs_checked,
        "tensor": tensor_json(&verdict.tensor),
    })
}
