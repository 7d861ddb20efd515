use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Refuted,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Holds => 0,
            Verdict::Refuted => 1,
            Verdict::Error => 2,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Refuted => "refuted",
            Verdict::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub var: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOut {
    pub assignments: Vec<Assignment>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOut {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub note: String,
}

/// Result of one command, rendered as JSON or as `key: value` lines.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub summary: String,
    pub defect: Option<String>,
    pub witness: Option<WitnessOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, String>) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            params,
            verdict: Verdict::Error,
            summary: String::new(),
            defect: None,
            witness: None,
            checks: None,
            error: None,
            timing_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "params: {}", params.join(" "));
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if !self.summary.is_empty() {
            let _ = writeln!(out, "summary: {}", self.summary);
        }
        if let Some(d) = &self.defect {
            let _ = writeln!(out, "defect: {d}");
        }
        if let Some(w) = &self.witness {
            let pairs: Vec<String> = w.assignments.iter().map(|a| format!("{}={}", a.var, a.value)).collect();
            let _ = writeln!(out, "witness: {} -> {}", pairs.join(", "), w.value);
        }
        if let Some(checks) = &self.checks {
            for c in checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(out, "check {}: {status} [{} cases] {}: {}", c.criterion, c.cases, c.name, c.note);
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "timing_ms: {}", self.timing_ms);
        out
    }
}
