//! Machine-readable experiment reports shared by the CLI and the test
//! suite. Maps are ordered so serialization is byte-stable across runs
//! (timing excluded from the determinism contract).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: serde_json::Value,
    pub timing_ms: f64,
    pub artifact_version: String,
}

impl ExperimentReport {
    pub fn new(command: &str) -> Self {
        ExperimentReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outputs: serde_json::Value::Null,
            timing_ms: 0.0,
            artifact_version: ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// RFC-4180 field quoting: wrap in quotes when the field contains a comma,
/// quote, or line break; embedded quotes are doubled.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_serialization() {
        let mk = || {
            ExperimentReport::new("simulate")
                .input("p", 19u64)
                .input("m", 2u64)
        };
        let (mut a, mut b) = (mk(), mk());
        a.outputs = serde_json::json!({"values": [1, 2, 4]});
        b.outputs = serde_json::json!({"values": [1, 2, 4]});
        a.timing_ms = 1.5;
        b.timing_ms = 99.0;
        let strip = |r: &ExperimentReport| {
            let mut v = serde_json::to_value(r).unwrap();
            v.as_object_mut().unwrap().remove("timing_ms");
            v.to_string()
        };
        assert_eq!(strip(&a), strip(&b));
        assert!(a.to_json().contains("\"artifact_version\""));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
