//! Structured outcome of an axiom or theorem check.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// At most this many witnesses are retained per report.
pub const WITNESS_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instances: u64,
    pub violations: u64,
    pub witnesses: Vec<Value>,
    pub ms: u64,
    /// Instances whose preconditions failed and were not checked.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub skipped: u64,
    /// Check-specific outcome data that is not a violation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            instances: 0,
            violations: 0,
            witnesses: Vec::new(),
            ms: 0,
            skipped: 0,
            details: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn instance(&mut self) {
        self.instances += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn violation(&mut self, witness: Value) {
        self.violations += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness);
        }
    }

    /// Records a pass/fail assertion as one instance.
    pub fn assert(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instance();
        if !ok {
            self.violation(witness());
        }
    }

    /// Merges another report's counts and witnesses; witnesses are put in
    /// canonical order before the cap is applied.
    pub fn merge(&mut self, other: CheckReport) {
        self.instances += other.instances;
        self.violations += other.violations;
        self.skipped += other.skipped;
        self.ms += other.ms;
        if self.details.is_none() {
            self.details = other.details;
        }
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by_cached_key(|w| w.to_string());
        self.witnesses.truncate(WITNESS_CAP);
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.ms = start.elapsed().as_millis() as u64;
        self
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: {} instances, {} violations, {} skipped, {} ms",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check,
            self.instances,
            self.violations,
            self.skipped,
            self.ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn witnesses_capped_and_counted() {
        let mut r = CheckReport::new("x");
        for i in 0..150 {
            r.assert(false, || json!(i));
        }
        assert_eq!(r.violations, 150);
        assert_eq!(r.witnesses.len(), WITNESS_CAP);
        assert!(!r.passed());
    }

    #[test]
    fn serializes_to_schema() {
        let r = CheckReport::new("paper-q");
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            json!({"check": "paper-q", "instances": 0, "violations": 0, "witnesses": [], "ms": 0})
        );
    }

    #[test]
    fn merge_is_associative_on_counts() {
        let mk = |n: u64| {
            let mut r = CheckReport::new("m");
            for i in 0..n {
                r.assert(i % 2 == 0, || json!(i));
            }
            r
        };
        let mut a = mk(3);
        a.merge(mk(4));
        let mut b = mk(4);
        b.merge(mk(3));
        assert_eq!(a.instances, b.instances);
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.witnesses, b.witnesses);
    }
}
