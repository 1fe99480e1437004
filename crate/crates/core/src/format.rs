//! Canonical text encodings of factorizations.
//!
//! The structured form is JSON with one edge list per line, written by hand
//! so that the output is stable and diff-friendly. Parsing accepts any JSON
//! with the same fields and ignores extra ones.

use std::fmt::Write;

use crate::detach::Factorization;

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let body: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", body.join(", "))
}

/// Canonical JSON for `f`, with a trailing newline. Extra top-level fields
/// are appended verbatim as `(key, json)` pairs after `factors`.
pub fn to_json_with(f: &Factorization, extra: &[(&str, serde_json::Value)]) -> String {
    let mut f = f.clone();
    f.canonicalize();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"n\": {},", f.n);
    let _ = writeln!(out, "  \"h\": {},", f.h);
    let _ = writeln!(out, "  \"lambda\": {},", f.lambda);
    let _ = writeln!(out, "  \"r\": {},", list(&f.r));
    out.push_str("  \"factors\": [");
    for (i, factor) in f.factors.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        let edges: Vec<String> = factor.iter().map(|e| list(e)).collect();
        let _ = write!(out, "    [{}]", edges.join(", "));
    }
    out.push_str(if f.factors.is_empty() { "]" } else { "\n  ]" });
    for (key, value) in extra {
        let body = serde_json::to_string_pretty(value).unwrap_or_else(|_| "null".into());
        let _ = write!(
            out,
            ",\n  {}: {}",
            serde_json::Value::from(*key),
            body.replace('\n', "\n  ")
        );
    }
    out.push_str("\n}\n");
    out
}

pub fn to_json(f: &Factorization) -> String {
    to_json_with(f, &[])
}

pub fn from_json(text: &str) -> serde_json::Result<Factorization> {
    serde_json::from_str(text)
}

/// One block per factor, one edge per line.
pub fn to_text(f: &Factorization) -> String {
    let mut f = f.clone();
    f.canonicalize();
    let mut out = String::new();
    let r: Vec<String> = f.r.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "# n={} h={} lambda={} r={}",
        f.n,
        f.h,
        f.lambda,
        r.join(",")
    );
    for (i, factor) in f.factors.iter().enumerate() {
        let ri = f.r.get(i).copied().unwrap_or(0);
        let _ = writeln!(out, "\nfactor {} (r={}, {} edges)", i + 1, ri, factor.len());
        for e in factor {
            let verts: Vec<String> = e.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", verts.join(" "));
        }
    }
    out
}
