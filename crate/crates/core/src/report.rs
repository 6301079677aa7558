//! Machine-readable run reports.

use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::arith::{FieldDesc, FieldSpec};
use crate::relhunt::RelationBounds;

pub const CANONICAL_ROOT: &str = "least-dlog-leading-coefficient";
pub const BASIS_ORDER: &str = "1, y, y^2, ...";

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<RelationBounds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    pub moduli: Vec<FieldSpec>,
    pub canonical_root: String,
    pub basis_order: String,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig { canonical_root: CANONICAL_ROOT.into(), basis_order: BASIS_ORDER.into(), ..Default::default() }
    }
    pub fn with_field(mut self, f: &FieldDesc) -> Self {
        let s = f.spec();
        if !self.moduli.contains(&s) {
            self.moduli.push(s);
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: RunConfig,
    pub payload: Value,
    pub certificates: Vec<Value>,
    /// Overall verdict for commands that certify something.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(command: &str, config: RunConfig, payload: Value) -> Self {
        RunReport { command: command.into(), config, payload, certificates: Vec::new(), pass: None, timing: Timing { elapsed_ms: 0 } }
    }
    pub fn with_certificates(mut self, certs: Vec<Value>) -> Self {
        self.certificates = certs;
        self
    }
    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }
    pub fn timed(mut self, d: Duration) -> Self {
        self.timing.elapsed_ms = d.as_millis();
        self
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
    /// Everything except timing, for byte-level reproducibility checks.
    pub fn payload_bytes(&self) -> Vec<u8> {
        let v = serde_json::json!({
            "command": self.command,
            "config": self.config,
            "payload": self.payload,
            "certificates": self.certificates,
            "pass": self.pass,
        });
        serde_json::to_vec(&v).expect("report serializes")
    }
}
