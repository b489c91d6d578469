use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Value,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Fail => 2,
            _ => 0,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Value => "value",
        }
    }
}

/// Output of one command. Everything but `timing_ms` is a function of
/// the inputs, and keys are emitted in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    pub certificates: Vec<Value>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            verdict: Verdict::Pass,
            value: None,
            certificates: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Report {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Indented `key: value` listing of the same content.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "input {k}: {}", scalar(v));
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if let Some(v) = &self.value {
            let _ = writeln!(out, "value: {}", scalar(v));
        }
        let _ = writeln!(out, "certificates: {}", self.certificates.len());
        for (k, c) in self.certificates.iter().enumerate() {
            let _ = writeln!(out, "- certificate {}", k + 1);
            text_value(&mut out, c, 1);
        }
        let _ = writeln!(out, "timing_ms: {}", self.timing_ms);
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || (x.is_array() && !is_flat(x)) {
                    let _ = writeln!(out, "{pad}{k}:");
                    text_value(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {}", inline(x));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() || x.is_array() {
                    let _ = writeln!(out, "{pad}-");
                    text_value(out, x, depth + 1);
                } else {
                    let _ = writeln!(out, "{pad}- {}", scalar(x));
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

fn is_flat(v: &Value) -> bool {
    v.as_array().is_some_and(|a| a.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => scalar(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_and_text() {
        let mut r = Report::new("check-e1").input("file", "i1.json");
        r.verdict = Verdict::Fail;
        r.certificates.push(json!({"events": ["(00|x1,x2)", "(11|x2,x3)"], "total": "3/2"}));
        let j = r.to_json();
        assert!(j.contains("\"verdict\": \"fail\""));
        assert!(!j.contains("\"value\""));
        let t = r.to_text();
        assert!(t.contains("verdict: fail"));
        assert!(t.contains("  events: (00|x1,x2), (11|x2,x3)"));
        assert!(t.contains("  total: 3/2"));
        assert_eq!(Verdict::Fail.exit_code(), 2);
    }
}
