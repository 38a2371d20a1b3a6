use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

/// JSON record of one run. Everything except `timings` is deterministic.
#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub diagnostics: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timings: BTreeMap<String, f64>,
}

impl Summary {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn diag(&mut self, key: &str, v: impl Serialize) {
        self.diagnostics
            .insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn tol(&mut self, key: &str, v: f64) {
        self.tolerances.insert(key.into(), v);
    }

    /// Records `value ≤ limit`.
    pub fn at_most(&mut self, name: &str, value: f64, limit: f64) -> bool {
        self.check(name, value, limit, value <= limit)
    }

    pub fn check(&mut self, name: &str, value: f64, limit: f64, passed: bool) -> bool {
        self.checks.push(Check {
            name: name.into(),
            value,
            limit,
            passed,
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }
}
