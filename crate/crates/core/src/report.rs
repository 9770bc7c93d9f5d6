//! Verification reports: one named check, its worst margin and where it
//! occurred, and enough metadata to reproduce it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::space::SpaceSpec;

pub type Meta = BTreeMap<String, Value>;

/// Outcome of a single verification check.
///
/// `passed` holds exactly when `worst_margin >= -grid_meta["tolerance"]`;
/// a margin is the signed slack of the inequality being checked, so
/// negative values are violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub space: Option<SpaceSpec>,
    pub parameters: Meta,
    pub passed: bool,
    pub worst_margin: f64,
    pub worst_location: Meta,
    pub grid_meta: Meta,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn tolerance(&self) -> f64 {
        self.grid_meta.get("tolerance").and_then(Value::as_f64).unwrap_or(0.0)
    }

    /// Check the `passed <=> worst_margin >= -tolerance` invariant.
    pub fn is_consistent(&self) -> bool {
        self.passed == (self.worst_margin >= -self.tolerance())
    }
}

/// Finite JSON number; non-finite values become strings so output stays valid JSON.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}

/// Incrementally builds a [`VerificationReport`] by observing margins.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    report: VerificationReport,
    observed: bool,
}

impl ReportBuilder {
    pub fn new(check_id: impl Into<String>, tolerance: f64) -> Self {
        let mut grid_meta = Meta::new();
        grid_meta.insert("tolerance".into(), num(tolerance));
        Self {
            report: VerificationReport {
                check_id: check_id.into(),
                space: None,
                parameters: Meta::new(),
                passed: true,
                worst_margin: f64::INFINITY,
                worst_location: Meta::new(),
                grid_meta,
                notes: Vec::new(),
            },
            observed: false,
        }
    }

    pub fn space(mut self, space: SpaceSpec) -> Self {
        self.report.space = Some(space);
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.report.parameters.insert(key.into(), value.into());
        self
    }

    pub fn param_f(self, key: &str, value: f64) -> Self {
        self.param(key, num(value))
    }

    pub fn grid(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.report.grid_meta.insert(key.into(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.report.notes.push(note.into());
        self
    }

    pub fn add_note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.report.parameters.insert(key.into(), value.into());
    }

    /// Record a margin at a location; keeps the smallest one seen.
    pub fn observe(&mut self, margin: f64, location: &[(&str, f64)]) {
        self.observed = true;
        let worse = margin < self.report.worst_margin || margin.is_nan();
        if worse && !self.report.worst_margin.is_nan() {
            self.report.worst_margin = margin;
            self.report.worst_location = location.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
        }
    }

    pub fn finish(mut self) -> VerificationReport {
        if !self.observed {
            self.report.worst_margin = 0.0;
            self.report.notes.push("no samples were checked".into());
        }
        let tol = self.report.tolerance();
        if self.report.worst_margin.is_nan() {
            self.report.passed = false;
            self.report.worst_margin = f64::NEG_INFINITY;
        } else {
            self.report.passed = self.report.worst_margin >= -tol;
        }
        if !self.report.worst_margin.is_finite() {
            // keep the JSON numeric: clamp to the largest representable magnitude
            self.report.worst_margin = self.report.worst_margin.signum() * f64::MAX;
        }
        self.report
    }

    /// A check that does not apply to this configuration: passes trivially
    /// with zero margin and says why.
    pub fn not_applicable(mut self, reason: impl Into<String>) -> VerificationReport {
        self.report.notes.push(format!("not applicable: {}", reason.into()));
        self.report.worst_margin = 0.0;
        self.report.passed = true;
        self.report
    }
}

/// All reports passed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_tracks_minimum() {
        let mut b = ReportBuilder::new("demo", 1e-8);
        b.observe(0.5, &[("r", 1.0)]);
        b.observe(-1e-9, &[("r", 2.0)]);
        b.observe(0.1, &[("r", 3.0)]);
        let r = b.finish();
        assert!(r.passed);
        assert_eq!(r.worst_margin, -1e-9);
        assert_eq!(r.worst_location["r"], num(2.0));
        assert!(r.is_consistent());
    }

    #[test]
    fn nan_fails() {
        let mut b = ReportBuilder::new("demo", 1.0);
        b.observe(f64::NAN, &[]);
        b.observe(3.0, &[]);
        let r = b.finish();
        assert!(!r.passed);
        assert!(r.is_consistent());
    }

    #[test]
    fn json_round_trip() {
        let mut b = ReportBuilder::new("demo", 1e-6).param("k", 2).note("hello");
        b.observe(0.25, &[("r", 0.1), ("y", 0.5)]);
        let r = b.finish();
        let s = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(r, back);
    }
}
