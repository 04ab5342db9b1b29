//! Structured check records, rendered as tab-separated `key=json` lines or
//! as a single JSON document.

use serde::Serialize;
use serde_json::{json, Value};

use crate::{LOG_CONVENTION, VERSION};

pub const TOOL: &str = "legendre-rip";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    /// A failure makes the run fail.
    Hard,
    /// A failure is logged only.
    Soft,
    /// Descriptive output with no pass criterion.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub params: Value,
    pub value: Value,
    pub bound: Value,
    pub pass: bool,
    pub witness: Value,
    pub mode: Value,
    pub seed: Value,
    pub severity: Severity,
}

impl Record {
    pub fn new(check: impl Into<String>, severity: Severity) -> Self {
        Record {
            check: check.into(),
            params: Value::Null,
            value: Value::Null,
            bound: Value::Null,
            pass: true,
            witness: Value::Null,
            mode: Value::Null,
            seed: Value::Null,
            severity,
        }
    }

    pub fn params(mut self, v: impl Serialize) -> Self {
        self.params = to_value(v);
        self
    }

    pub fn value(mut self, v: impl Serialize) -> Self {
        self.value = to_value(v);
        self
    }

    pub fn bound(mut self, v: impl Serialize) -> Self {
        self.bound = to_value(v);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn witness(mut self, v: impl Serialize) -> Self {
        self.witness = to_value(v);
        self
    }

    pub fn mode(mut self, v: impl Serialize) -> Self {
        self.mode = to_value(v);
        self
    }

    pub fn seed(mut self, v: impl Serialize) -> Self {
        self.seed = to_value(v);
        self
    }

    pub fn is_hard_failure(&self) -> bool {
        self.severity == Severity::Hard && !self.pass
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: Value,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(config: Value) -> Self {
        Report {
            config,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn has_hard_failure(&self) -> bool {
        self.records.iter().any(Record::is_hard_failure)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# {TOOL} {VERSION}\n# log {LOG_CONVENTION}\n# config {}\n",
            serde_json::to_string(&self.config).expect("json")
        );
        for r in &self.records {
            let fields = [
                ("check", json!(r.check)),
                ("params", r.params.clone()),
                ("value", r.value.clone()),
                ("bound", r.bound.clone()),
                ("pass", json!(r.pass)),
                ("witness", r.witness.clone()),
                ("mode", r.mode.clone()),
                ("seed", r.seed.clone()),
                ("severity", to_value(r.severity)),
            ];
            let line: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("{k}={}", serde_json::to_string(v).expect("json")))
                .collect();
            out.push_str(&line.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "log": LOG_CONVENTION,
            "config": self.config,
            "records": self.records,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }
}
