//! Text and JSON rendering of nilpotence reports.

use std::fmt::Write as _;

use malcev_core::{NilIndex, NilpotenceReport};
use serde_json::{json, Value};

fn yes_no(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn index_json(n: NilIndex) -> Value {
    match n {
        NilIndex::Index(k) => json!(k),
        NilIndex::Never => json!("never"),
        NilIndex::Unknown => json!("unknown"),
    }
}

/// Line-oriented `key: value` form.
pub fn render_text(r: &NilpotenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim: {}", r.dim);
    let _ = writeln!(out, "field: {}", r.field);
    let _ = writeln!(out, "ideal: {{{}}}", r.ideal_basis.join(", "));
    let _ = writeln!(out, "cap: {}", r.cap);
    let _ = writeln!(out, "right_index: {}", r.right_index);
    let _ = writeln!(out, "left_index: {}", r.left_index);
    let _ = writeln!(out, "assoc_index: {}", r.assoc_index);
    let _ = writeln!(out, "strong_index: {}", r.strong_index);
    let _ = writeln!(out, "jk_nil_index: {}", r.jk_nil_index);
    match r.bound_4n2 {
        Some(b) => {
            let _ = writeln!(out, "bound_4n2: {b}");
        }
        None => out.push_str("bound_4n2: none\n"),
    }
    match r.bound_satisfied {
        Some(ok) => {
            let _ = writeln!(out, "bound_satisfied: {}", yes_no(ok));
        }
        None => out.push_str("bound_satisfied: n/a\n"),
    }
    for c in &r.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(out, "check {}: {status}", c.name);
        } else {
            let _ = writeln!(out, "check {}: {status} ({})", c.name, c.detail);
        }
    }
    out
}

pub fn render_json(r: &NilpotenceReport) -> String {
    let checks: Vec<Value> =
        r.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
    let v = json!({
        "dim": r.dim,
        "field": r.field.to_string(),
        "ideal": r.ideal_basis,
        "cap": r.cap,
        "right_index": index_json(r.right_index),
        "left_index": index_json(r.left_index),
        "assoc_index": index_json(r.assoc_index),
        "strong_index": index_json(r.strong_index),
        "jk_nil_index": index_json(r.jk_nil_index),
        "bound_4n2": r.bound_4n2,
        "bound_satisfied": r.bound_satisfied,
        "checks": checks,
    });
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}
