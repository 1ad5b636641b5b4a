//! Plain-text rendering of a report.

use crate::report::Report;
use serde_json::Value;
use std::fmt::Write;

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command  {}", report.command.join(" "));
    let status = serde_json::to_value(report.status).expect("status serializes");
    let _ = writeln!(out, "status   {} (exit {})", status.as_str().unwrap_or_default(), report.exit_code);
    for input in &report.inputs {
        let _ = writeln!(out, "input    {}  sha256 {}", input.path, input.sha256);
    }
    if let Some(error) = &report.error {
        let _ = writeln!(out, "error    {}: {}", error.kind, error.message);
    }
    if !report.checks.is_empty() {
        out.push_str("\nchecks\n");
        let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &report.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            let line = match &c.detail {
                Some(d) => format!("  {mark}  {:width$}  {d}", c.name),
                None => format!("  {mark}  {}", c.name),
            };
            out.push_str(&line);
            out.push('\n');
        }
    }
    if let Some(result) = &report.result {
        out.push_str("\nresult\n");
        let mut rows = Vec::new();
        flatten("", result, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            let _ = writeln!(out, "  {k:width$}  {v}");
        }
    }
    out
}

/// One row per scalar or short array, keyed by its JSON path.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            rows.push((prefix.to_string(), value.to_string()));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
