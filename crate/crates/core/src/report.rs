//! Machine-readable verification outcomes.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// How a record's value is compared with its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when `value ≤ tolerance`.
    AtMost,
    /// Passes when `value ≥ tolerance`.
    AtLeast,
    /// Passes when `value == tolerance` exactly.
    Equal,
    /// Recorded for information only; always passes.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    pub wall_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        value: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let pass = value.is_finite()
            && match comparison {
                Comparison::AtMost => value <= tolerance,
                Comparison::AtLeast => value >= tolerance,
                Comparison::Equal => value == tolerance,
                Comparison::Info => true,
            };
        // JSON has no representation for non-finite numbers.
        let value = if value.is_finite() { value } else { f64::MAX };
        Self {
            id: id.into(),
            anchor: anchor.into(),
            value,
            tolerance,
            comparison,
            pass: pass || comparison == Comparison::Info,
            wall_time: 0.0,
            detail: None,
        }
    }

    pub fn at_most(id: impl Into<String>, anchor: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(id, anchor, value, tolerance, Comparison::AtMost)
    }

    pub fn at_least(id: impl Into<String>, anchor: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(id, anchor, value, bound, Comparison::AtLeast)
    }

    pub fn equal(id: impl Into<String>, anchor: impl Into<String>, value: f64, expected: f64) -> Self {
        Self::new(id, anchor, value, expected, Comparison::Equal)
    }

    /// Exact boolean check, recorded as a violation count against zero.
    pub fn exact(id: impl Into<String>, anchor: impl Into<String>, violations: usize) -> Self {
        Self::new(id, anchor, violations as f64, 0.0, Comparison::Equal)
    }

    pub fn info(id: impl Into<String>, anchor: impl Into<String>, value: f64) -> Self {
        Self::new(id, anchor, value, 0.0, Comparison::Info)
    }

    /// A check that could not be evaluated because the computation failed.
    pub fn failed(id: impl Into<String>, anchor: impl Into<String>, message: impl Into<String>) -> Self {
        let mut r = Self::new(id, anchor, f64::NAN, 0.0, Comparison::AtMost);
        r.detail = Some(message.into());
        r
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_time(mut self, seconds: f64) -> Self {
        self.wall_time = seconds;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64, config: Value) -> Self {
        Self { suite: suite.into(), seed, config, records: Vec::new(), pass: true, wall_time: 0.0 }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.pass &= record.pass;
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        for r in records {
            self.push(r);
        }
    }

    /// Appends all records of `other`, prefixing their ids with its suite name.
    pub fn merge(&mut self, other: VerificationReport) {
        for mut r in other.records {
            r.id = format!("{}.{}", other.suite, r.id);
            self.push(r);
        }
        self.wall_time += other.wall_time;
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn to_json_string(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json_str(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// The report with every wall-time field zeroed, for reproducibility
    /// comparisons.
    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        out.wall_time = 0.0;
        for r in &mut out.records {
            r.wall_time = 0.0;
        }
        out
    }
}

/// Runs `f` and returns its output together with the elapsed seconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_logic() {
        assert!(CheckRecord::at_most("a", "x", 1e-12, 1e-10).pass);
        assert!(!CheckRecord::at_most("a", "x", 1e-9, 1e-10).pass);
        assert!(CheckRecord::at_least("a", "x", 0.0, -1e-10).pass);
        assert!(!CheckRecord::at_most("a", "x", f64::NAN, 1.0).pass);
        assert!(CheckRecord::exact("a", "x", 0).pass);
        assert!(!CheckRecord::exact("a", "x", 2).pass);
        assert!(CheckRecord::info("a", "x", 5.0).pass);
    }

    #[test]
    fn overall_pass_and_round_trip() {
        let mut r = VerificationReport::new("demo", 7, serde_json::json!({"k": 1}));
        r.push(CheckRecord::at_most("ok", "anchor", 0.1 + 0.2, 1.0).with_time(0.5));
        assert!(r.pass);
        r.push(CheckRecord::failed("bad", "anchor", "solver failed"));
        assert!(!r.pass);
        let s = r.to_json_string().unwrap();
        let back = VerificationReport::from_json_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.records[0].value.to_bits(), (0.1f64 + 0.2).to_bits());
    }
}
