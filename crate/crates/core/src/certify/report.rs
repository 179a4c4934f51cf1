use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Most failures recorded per step; the total is still counted.
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
    pub failed: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub stats: BTreeMap<String, serde_json::Value>,
}

impl StepRecord {
    pub fn new(name: &str) -> Self {
        StepRecord {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
            failed: 0,
            stats: BTreeMap::new(),
        }
    }

    /// Counts one check; `describe` runs only on failure.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.fail(describe());
        }
        ok
    }

    pub fn fail(&mut self, message: String) {
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(message);
        }
    }

    pub fn stat(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.stats.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub b: usize,
    pub target: String,
    pub verified: bool,
    pub steps: Vec<StepRecord>,
    /// The first offending object: a failing composition, or the negative
    /// index found by the final positivity check.
    pub witness: Option<String>,
}

impl CertificateReport {
    pub fn new(b: usize, target: &str) -> Self {
        CertificateReport {
            b,
            target: target.to_string(),
            verified: false,
            steps: Vec::new(),
            witness: None,
        }
    }

    pub fn push(&mut self, step: StepRecord) {
        self.steps.push(step);
    }

    /// Sets `verified` from the recorded steps.
    pub fn finish(mut self, final_witness: Option<String>) -> Self {
        self.verified = !self.steps.is_empty() && self.steps.iter().all(StepRecord::passed);
        self.witness = final_witness.or_else(|| self.steps.iter().find_map(|s| s.failures.first().cloned()));
        self
    }

    pub fn step(&self, name: &str) -> Option<&StepRecord> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = if self.verified { "verified" } else { "NOT verified" };
        writeln!(out, "{} certificate, b = {}: {}", self.target, self.b, status).unwrap();
        for s in &self.steps {
            let mark = if s.passed() { "ok  " } else { "FAIL" };
            write!(out, "  [{mark}] {:<28} checked {:>8}", s.name, s.checked).unwrap();
            if s.failed > 0 {
                write!(out, ", failed {}", s.failed).unwrap();
            }
            for (k, v) in &s.stats {
                write!(out, ", {k} = {v}").unwrap();
            }
            out.push('\n');
            for f in &s.failures {
                writeln!(out, "         {f}").unwrap();
            }
        }
        if let Some(w) = &self.witness {
            writeln!(out, "  witness: {w}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_are_capped_but_counted() {
        let mut s = StepRecord::new("demo");
        for i in 0..30 {
            s.check(i % 2 == 0, || format!("bad {i}"));
        }
        assert_eq!((s.checked, s.failed, s.failures.len()), (30, 15, 15));
        for i in 0..10 {
            s.fail(format!("more {i}"));
        }
        assert_eq!((s.failed, s.failures.len()), (25, 20));
    }

    #[test]
    fn json_shape() {
        let mut r = CertificateReport::new(3, "Y0");
        let mut s = StepRecord::new("prop-f-sign");
        s.check(true, String::new);
        r.push(s);
        let r = r.finish(None);
        assert!(r.verified);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["b"], 3);
        assert_eq!(v["target"], "Y0");
        assert_eq!(v["steps"][0]["name"], "prop-f-sign");
        assert_eq!(v["steps"][0]["checked"], 1);
        assert!(v["steps"][0]["failures"].as_array().unwrap().is_empty());
        assert!(v["witness"].is_null());
    }
}
