//! The versioned JSON report written by every command.

use std::collections::BTreeMap;

use hciz_core::numeric::{MCEstimate, RNG_DESCRIPTION};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub hciz: &'static str,
    pub hciz_core: &'static str,
    pub rng: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { hciz: env!("CARGO_PKG_VERSION"), hciz_core: hciz_core::VERSION, rng: RNG_DESCRIPTION }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub versions: Versions,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, results: Value, checks: Vec<Check>) -> Self {
        let all_passed = checks.iter().all(|c| c.pass);
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            inputs,
            results,
            checks,
            all_passed,
            error: None,
            versions: Versions::default(),
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn failure(command: &str, inputs: BTreeMap<String, String>, err: &CliError) -> Self {
        let mut r = Report::new(command, inputs, Value::Null, Vec::new());
        r.all_passed = false;
        r.error = Some(ErrorInfo { kind: err.kind(), message: err.to_string(), exit_code: err.exit_code() });
        r
    }

    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.exit_code,
            None if self.all_passed => 0,
            None => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn estimate_json(e: &MCEstimate) -> Value {
    json!({
        "mean": complex_json(e.mean),
        "stderr": e.stderr,
        "stderr_re": e.stderr_re,
        "stderr_im": e.stderr_im,
        "n_samples": e.n_samples,
        "seed": e.seed,
        "workers": e.workers,
    })
}
