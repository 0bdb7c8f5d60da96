//! Versioned JSON reports.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ybmaps::{CheckReport, Status};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub rng_seed: u64,
    pub checks: Vec<CheckReport>,
    /// Extra structured output (e.g. discovered solutions).
    pub data: Option<Value>,
}

/// Hex SHA-256 of the inputs, each followed by a NUL separator.
pub fn digest_inputs<I, S>(inputs: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut h = Sha256::new();
    for i in inputs {
        h.update(i.as_ref());
        h.update([0u8]);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: impl Into<String>, inputs_digest: String, rng_seed: u64) -> Self {
        Report {
            command: command.into(),
            inputs_digest,
            rng_seed,
            checks: Vec::new(),
            data: None,
        }
    }

    pub fn push(&mut self, c: CheckReport) {
        self.checks.push(c);
    }

    pub fn overall(&self) -> Status {
        Status::from_bool(self.checks.iter().all(|c| c.passed()))
    }

    /// Timings are left out unless asked for, so that equal inputs give
    /// byte-identical output.
    pub fn to_json(&self, timings: bool) -> String {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = serde_json::to_value(c).expect("report serializes");
                if timings {
                    v["timing_ms"] = json!(c.timing.as_secs_f64() * 1e3);
                }
                v
            })
            .collect();
        let mut out = json!({
            "schema": SCHEMA,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "rng_seed": self.rng_seed,
            "overall": self.overall(),
            "checks": checks,
        });
        if let Some(d) = &self.data {
            out["data"] = d.clone();
        }
        serde_json::to_string_pretty(&out).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ybmaps::Method;

    #[test]
    fn overall_and_determinism() {
        let mut r = Report::new("verify", digest_inputs(["a", "b"]), 7);
        r.push(CheckReport::new("x", Status::Pass, Method::Exact));
        assert_eq!(r.overall(), Status::Pass);
        let j1 = r.to_json(false);
        assert_eq!(j1, r.to_json(false));
        assert!(j1.contains("\"schema\": 1"));
        assert!(!j1.contains("timing_ms"));
        assert!(r.to_json(true).contains("timing_ms"));
        r.push(CheckReport::new("y", Status::Fail, Method::Randomized));
        assert_eq!(r.overall(), Status::Fail);
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest_inputs(["ab", "c"]), digest_inputs(["a", "bc"]));
        assert_eq!(digest_inputs(["x"]).len(), 64);
    }
}
