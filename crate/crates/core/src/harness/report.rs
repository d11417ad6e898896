//! Run reports and their renderings.

use serde::Serialize;
use serde_json::Value;

use super::fuzz::FuzzSummary;
use crate::constraint::ConstrainedReport;
use crate::error::Error;
use crate::pde::{RefinementReport, SpectrumReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

/// One invocation's output. Fields serialize in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constrained: Option<ConstrainedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weak: Vec<ConstrainedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ErrorInfo>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: None,
            input: None,
            constrained: None,
            spectrum: None,
            weak: Vec::new(),
            refinement: None,
            fuzz: None,
            errors: Vec::new(),
            warnings: Vec::new(),
            elapsed_ms: None,
            verdict: Verdict::Pass,
        }
    }

    pub fn record_error(&mut self, e: &Error) {
        self.errors.push(e.into());
    }

    /// Fail iff an error was recorded or any agreement / decomposition flag is false.
    pub fn finalize(&mut self) {
        let ok = self.errors.is_empty()
            && self.constrained.as_ref().is_none_or(|c| c.agreement)
            && self.weak.iter().all(|c| c.agreement)
            && self.spectrum.as_ref().is_none_or(|s| s.decomposition_ok)
            && self
                .refinement
                .as_ref()
                .is_none_or(|r| r.levels.iter().all(|l| l.decomposition_ok != Some(false)))
            && self.fuzz.as_ref().is_none_or(FuzzSummary::passed);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// `path: value` lines derived from the JSON form.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports always serialize");
        let mut out = String::new();
        flatten(&value, "", &mut out);
        out
    }
}

fn flatten(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(child, &p, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(child, &format!("{path}[{i}]"), out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_array()) => {
            out.push_str(&format!("{path}: [{} rows]\n", items.len()));
        }
        Value::Array(items) if items.len() > 12 => {
            let head: Vec<String> = items.iter().take(6).map(scalar).collect();
            out.push_str(&format!(
                "{path}: [{}, ... ({} values)]\n",
                head.join(", "),
                items.len()
            ));
        }
        Value::Array(items) => {
            let all: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{path}: [{}]\n", all.join(", ")));
        }
        other => out.push_str(&format!("{path}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
