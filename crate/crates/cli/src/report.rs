use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "opkit.report/1";

/// Verification report. `checks[k]` is true iff `residuals[k] ≤ tolerances[k]`,
/// and `pass` is the conjunction of all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub inputs_digest: String,
    pub results: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
}

pub struct ReportBuilder {
    command: String,
    digest: Sha256,
    results: BTreeMap<String, Value>,
    residuals: BTreeMap<String, f64>,
    tolerances: BTreeMap<String, f64>,
}

impl ReportBuilder {
    pub fn new(command: &str) -> Self {
        let mut digest = Sha256::new();
        digest.update(command.as_bytes());
        ReportBuilder {
            command: command.to_string(),
            digest,
            results: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerances: BTreeMap::new(),
        }
    }

    /// Feeds a named input (file contents or a parameter) into the digest.
    pub fn input(&mut self, name: &str, bytes: &[u8]) -> &mut Self {
        for part in [name.as_bytes(), &(bytes.len() as u64).to_le_bytes(), bytes] {
            self.digest.update(part);
        }
        self
    }

    pub fn param(&mut self, name: &str, value: impl std::fmt::Display) -> &mut Self {
        self.input(name, value.to_string().as_bytes())
    }

    pub fn result(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.results.insert(name.to_string(), v);
        self
    }

    /// Records `residual ≤ tolerance` as a named check. Non-finite residuals
    /// are stored as `f64::MAX` so the report stays valid JSON and still fails.
    pub fn check(&mut self, name: &str, residual: f64, tolerance: f64) -> &mut Self {
        let r = if residual.is_finite() { residual } else { f64::MAX };
        self.residuals.insert(name.to_string(), r);
        self.tolerances.insert(name.to_string(), tolerance);
        self
    }

    pub fn finish(self) -> Report {
        let checks: BTreeMap<String, bool> =
            self.residuals.iter().map(|(k, r)| (k.clone(), *r <= self.tolerances[k])).collect();
        let pass = checks.values().all(|&c| c);
        Report {
            schema: SCHEMA.to_string(),
            command: self.command,
            inputs_digest: hex::encode(self.digest.finalize()),
            results: self.results,
            residuals: self.residuals,
            tolerances: self.tolerances,
            checks,
            pass,
        }
    }
}
