//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, details: impl Serialize) -> Self {
        let details = serde_json::to_value(details).expect("report details serialize");
        CheckResult { name: name.into(), pass, details }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    /// Echo of every resolved parameter, defaults included.
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Sorted by check name.
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

impl Report {
    pub fn new(op: impl Into<String>, variant: Option<String>, params: Value, seed: Option<u64>, mut results: Vec<CheckResult>) -> Self {
        results.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = results.iter().all(|r| r.pass);
        Report { schema_version: SCHEMA_VERSION.to_string(), op: op.into(), variant, params, seed, results, pass }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}
