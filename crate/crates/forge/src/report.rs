//! Report envelope and its two renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use malcev_forge_core::{Check, CheckReport, Status, Value};
use serde::Serialize;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    /// Subject and every parameter that influences the verdicts.
    pub subject: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub tuples: u64,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, subject: BTreeMap<String, Value>, checks: CheckReport) -> Report {
        Report {
            tool_version: TOOL_VERSION,
            command: command.to_string(),
            subject,
            tuples: checks.total_tuples(),
            status: checks.worst(),
            exit_code: checks.exit_code(),
            checks: checks.checks,
            elapsed_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let subject: Vec<String> = self
            .subject
            .iter()
            .map(|(k, v)| format!("{k}={}", render_value(v)))
            .collect();
        let _ = writeln!(
            out,
            "malcev-forge {} {} {}",
            self.tool_version,
            self.command,
            subject.join(" ")
        );
        for c in &self.checks {
            let _ = write!(out, "  [{}] {}", c.status.as_str(), c.name);
            if c.tuples > 0 {
                let _ = write!(out, " ({} tuples)", c.tuples);
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = write!(out, "      witness: ({})", w.elements.join(", "));
                if let Some(r) = &w.residual {
                    let _ = write!(out, " residual {r}");
                }
                if let (Some(l), Some(r)) = (&w.lhs, &w.rhs) {
                    let _ = write!(out, " lhs {l} rhs {r}");
                }
                out.push('\n');
            }
            for (k, v) in &c.details {
                match v {
                    Value::List(items) if items.len() > 4 && items.iter().all(|i| matches!(i, Value::Text(_))) => {
                        let _ = writeln!(out, "      {k}:");
                        for i in items {
                            let _ = writeln!(out, "        {}", render_value(i));
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "      {k}: {}", render_value(v));
                    }
                }
            }
        }
        let _ = write!(
            out,
            "status: {} (exit {}), {} tuples",
            self.status.as_str(),
            self.exit_code,
            self.tuples
        );
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(out, ", {ms} ms");
        }
        out.push('\n');
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Int(n) => n.to_string(),
        Value::Text(s) => s.clone(),
        Value::List(items) => format!("[{}]", items.iter().map(render_value).collect::<Vec<_>>().join(", ")),
    }
}
