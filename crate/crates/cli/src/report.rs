//! Text and JSON rendering of command results.
//!
//! Coefficients are always printed as exact literals, never as floats.

use std::fmt::Write;

use partlin::closure::{BridgeReport, EasinessReport, GradeVerdict};
use partlin::{FClosure, FLinComb, FMatrix, FieldElem, Membership, SuiteReport};
use serde_json::{json, Value};

pub fn matrix_json(m: &FMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

/// Right-aligned columns, one matrix row per line.
pub fn matrix_text(m: &FMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect();
    let widths: Vec<usize> = (0..m.cols())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end()).unwrap();
    }
    out
}

pub fn comb_json(x: &FLinComb) -> Value {
    let mut v = x.to_json();
    v["literal"] = Value::String(x.to_string());
    v
}

fn verdict_json(v: &GradeVerdict<FieldElem>) -> Value {
    match v {
        GradeVerdict::Easy => json!({ "verdict": "easy" }),
        GradeVerdict::NonEasy(w) => json!({
            "verdict": "non_easy_at_this_bound",
            "witness": comb_json(w),
        }),
    }
}

/// Overall easiness label; either way the verdict only covers the bound.
pub fn easiness_label(report: &EasinessReport<FieldElem>) -> &'static str {
    if report.easy_at_bound() {
        "easy_up_to_bound"
    } else {
        "non_easy_at_this_bound"
    }
}

pub fn closure_json(res: &FClosure, easy: Option<&EasinessReport<FieldElem>>) -> Value {
    let grades: Vec<Value> = res
        .grades()
        .map(|(&(k, l), span)| {
            let mut g = json!({ "k": k, "l": l, "dim": span.rank() });
            if let Some(v) = easy.and_then(|r| r.grades.get(&(k, l))) {
                g.as_object_mut()
                    .unwrap()
                    .extend(verdict_json(v).as_object().unwrap().clone());
            }
            g
        })
        .collect();
    let mut out = json!({
        "dim": res.dim(),
        "bound": res.bound(),
        "mode": res.mode().to_string(),
        "flat_dims": res.flat_dimensions(),
        "grades": grades,
    });
    if let Some(r) = easy {
        out["easiness"] = json!(easiness_label(r));
    }
    out
}

pub fn closure_text(res: &FClosure, easy: Option<&EasinessReport<FieldElem>>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "closure at N={} up to length {} ({} mode)",
        res.dim(),
        res.bound(),
        res.mode()
    )
    .unwrap();
    for (&(k, l), span) in res.grades() {
        write!(out, "  ({k},{l})  dim {:>4}", span.rank()).unwrap();
        match easy.and_then(|r| r.grades.get(&(k, l))) {
            Some(GradeVerdict::Easy) => write!(out, "  easy").unwrap(),
            Some(GradeVerdict::NonEasy(w)) => write!(out, "  non-easy, witness {w}").unwrap(),
            None => {}
        }
        out.push('\n');
    }
    if let Some(r) = easy {
        if r.easy_at_bound() {
            writeln!(out, "easy up to length {}", res.bound()).unwrap();
        } else {
            writeln!(out, "non-easy at length {} (bound-relative)", res.bound()).unwrap();
        }
    }
    out
}

pub fn membership_label(m: Membership) -> &'static str {
    match m {
        Membership::Yes => "yes",
        Membership::NotAtThisBound => "not_at_this_bound",
    }
}

pub fn membership_json(m: Membership, x: &FLinComb, res: &FClosure) -> Value {
    json!({
        "member": membership_label(m),
        "bound": res.bound(),
        "dim": res.dim(),
        "mode": res.mode().to_string(),
        "element": comb_json(x),
    })
}

pub fn membership_text(m: Membership, res: &FClosure) -> String {
    match m {
        Membership::Yes => "yes\n".to_string(),
        Membership::NotAtThisBound => {
            format!("not found up to length {} (bound-relative)\n", res.bound())
        }
    }
}

pub fn bridge_json(r: &BridgeReport) -> Value {
    let mut v = serde_json::to_value(r).unwrap();
    v["equal"] = json!(r.all_equal());
    v
}

pub fn bridge_text(r: &BridgeReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "bridge at N={} sign {} up to length {}",
        r.dim, r.sign, r.bound
    )
    .unwrap();
    for g in &r.grades {
        let (k, l) = g.grade;
        writeln!(
            out,
            "  ({k},{l})  image {:>4}  closure {:>4}  {}",
            g.image_rank,
            g.closure_rank,
            if g.equal { "equal" } else { "MISMATCH" }
        )
        .unwrap();
    }
    writeln!(out, "{}", if r.all_equal() { "equal" } else { "mismatch" }).unwrap();
    out
}

pub fn suite_text(r: &SuiteReport) -> String {
    let mut out = String::new();
    let dims: Vec<String> = r.dims.iter().map(u64::to_string).collect();
    writeln!(out, "suite {} (N = {})", r.suite, dims.join(", ")).unwrap();
    for c in &r.checks {
        match (&c.detail, c.passed) {
            (_, true) => writeln!(out, "  ok    {}", c.name).unwrap(),
            (Some(d), false) => writeln!(out, "  FAIL  {}: {d}", c.name).unwrap(),
            (None, false) => writeln!(out, "  FAIL  {}", c.name).unwrap(),
        }
    }
    let failed = r.failures().count();
    writeln!(
        out,
        "{}: {} checks, {failed} failed",
        if r.passed { "pass" } else { "FAIL" },
        r.checks.len()
    )
    .unwrap();
    out
}
