use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::spectral::Sign;

pub const TOOL: &str = "vhiggs";

/// One JSON document per command. Key order is fixed by field order and the
/// maps are sorted, so identical inputs give identical bytes once timing is
/// suppressed.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub sign: String,
    pub passed: bool,
    pub verdicts: Map<String, Value>,
    pub certificates: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
    /// Reproducing instance on failure, or the produced instance for `build`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &'static str, sign: Sign) -> Self {
        Report {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            sign: sign.to_string(),
            passed: true,
            verdicts: Map::new(),
            certificates: Map::new(),
            error: None,
            instance: None,
            seed: None,
            timing_ms: None,
        }
    }

    pub fn verdict(&mut self, name: &str, ok: bool) {
        self.passed &= ok;
        self.verdicts.insert(name.to_string(), Value::Bool(ok));
    }

    pub fn certificate(&mut self, name: &str, value: impl Serialize) {
        self.certificates.insert(name.to_string(), serde_json::to_value(value).expect("plain data"));
    }

    pub fn fail(&mut self, kind: &str, message: impl ToString) {
        self.passed = false;
        self.error = Some(json!({"kind": kind, "message": message.to_string()}));
    }

    /// Lines for standard error.
    pub fn render(&self) -> String {
        let mut out = format!("{} {}: {}\n", self.tool, self.command, if self.passed { "PASS" } else { "FAIL" });
        for (k, v) in &self.verdicts {
            out.push_str(&format!("  {k:<28} {v}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {} ({})\n", e["message"].as_str().unwrap_or(""), e["kind"].as_str().unwrap_or("")));
        }
        out
    }
}
