use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One result as emitted in `--json` mode. Integers are carried as decimal
/// strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub method: Option<String>,
    pub elapsed_ms: String,
}

/// A command's result before rendering.
pub struct Output {
    pub command: &'static str,
    pub inputs: Vec<(&'static str, String)>,
    pub result: Value,
    pub method: Option<String>,
    pub text: String,
}

impl Output {
    pub fn into_record(self, elapsed_ms: f64) -> (OutputRecord, String) {
        let record = OutputRecord {
            command: self.command.to_string(),
            inputs: self
                .inputs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            result: self.result,
            method: self.method,
            elapsed_ms: format!("{elapsed_ms:.3}"),
        };
        (record, self.text)
    }
}

pub fn emit(out: &mut impl Write, record: &OutputRecord, text: &str, json: bool) {
    // Broken pipes are not worth a panic.
    let _ = if json {
        writeln!(out, "{}", serde_json::to_string(record).expect("record serializes"))
    } else {
        writeln!(out, "{text}")
    };
}

/// Decimal-string rendering of an integer for JSON payloads.
pub fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn nums<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(num).collect())
}
