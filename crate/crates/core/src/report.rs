use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of a residual-based verification run.
///
/// Relative residuals are `|r| / (1 + |reference|)`; `passed` is
/// `max_rel <= tolerance` and additionally requires that every entry of
/// `checks` passed. A NaN residual never passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub label: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub n_points: usize,
    pub n_skipped: usize,
    pub worst_point: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
    /// Auxiliary scalar diagnostics (observed orders, identity residuals, ...).
    #[serde(default)]
    pub details: BTreeMap<String, f64>,
    /// Side conditions with their own pass/fail verdict.
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
}

impl ResidualReport {
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: max_rel={:.3e} mean_rel={:.3e} max_abs={:.3e} tol={:.1e} points={} skipped={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.label,
            self.max_rel,
            self.mean_rel,
            self.max_abs,
            self.tolerance,
            self.n_points,
            self.n_skipped
        )
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Attach a side condition; a failing one fails the report.
    pub fn with_check(mut self, key: &str, ok: bool) -> Self {
        self.checks.insert(key.to_string(), ok);
        self.passed = self.passed && ok;
        self
    }

    /// Re-judge against another tolerance (side checks still apply).
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.n_points > 0 && self.max_rel <= tolerance && self.checks.values().all(|&ok| ok);
        self
    }

    /// Fold several reports into one (max of maxima, point-weighted mean).
    pub fn merge(label: &str, reports: &[ResidualReport]) -> ResidualReport {
        let mut acc = Accumulator::new();
        let mut tol = 0.0f64;
        let mut checks = BTreeMap::new();
        let mut details = BTreeMap::new();
        let mut all_passed = true;
        for r in reports {
            tol = tol.max(r.tolerance);
            all_passed &= r.passed;
            acc.n_points += r.n_points;
            acc.n_skipped += r.n_skipped;
            acc.sum_rel += r.mean_rel * r.n_points as f64;
            if r.max_abs > acc.max_abs || r.max_abs.is_nan() {
                acc.max_abs = r.max_abs;
            }
            if r.max_rel > acc.max_rel || r.max_rel.is_nan() || acc.worst.is_empty() {
                acc.max_rel = r.max_rel;
                acc.worst = r.worst_point.clone();
            }
            for (k, v) in &r.checks {
                checks.insert(format!("{}/{}", r.label, k), *v);
            }
            for (k, v) in &r.details {
                details.insert(format!("{}/{}", r.label, k), *v);
            }
        }
        let mut out = acc.finish(label, tol);
        out.passed = all_passed && !reports.is_empty();
        out.checks = checks;
        out.details = details;
        out
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary_line())
    }
}

/// Running max/mean reduction used by all residual checks.
#[derive(Debug, Clone, Default)]
pub struct Accumulator {
    max_abs: f64,
    max_rel: f64,
    sum_rel: f64,
    n_points: usize,
    n_skipped: usize,
    worst: Vec<f64>,
    poisoned: bool,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, point: &[f64], abs: f64, rel: f64) {
        if !(abs.is_finite() && rel.is_finite()) {
            self.poisoned = true;
        }
        self.n_points += 1;
        self.sum_rel += rel;
        if abs > self.max_abs || abs.is_nan() {
            self.max_abs = abs;
        }
        if rel.is_nan() {
            self.max_rel = f64::NAN;
            self.worst = point.to_vec();
        } else if !self.max_rel.is_nan() && (rel > self.max_rel || self.worst.is_empty()) {
            self.max_rel = rel;
            self.worst = point.to_vec();
        }
    }

    pub fn skip(&mut self) {
        self.n_skipped += 1;
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn finish(self, label: &str, tolerance: f64) -> ResidualReport {
        let mean_rel = if self.n_points > 0 { self.sum_rel / self.n_points as f64 } else { 0.0 };
        let passed = !self.poisoned && self.n_points > 0 && self.max_rel <= tolerance;
        ResidualReport {
            label: label.to_string(),
            max_abs: self.max_abs,
            max_rel: self.max_rel,
            mean_rel,
            n_points: self.n_points,
            n_skipped: self.n_skipped,
            worst_point: self.worst,
            tolerance,
            passed,
            details: BTreeMap::new(),
            checks: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_never_passes() {
        let mut acc = Accumulator::new();
        acc.push(&[0.0], 1e-20, 1e-20);
        acc.push(&[1.0], f64::NAN, f64::NAN);
        acc.push(&[2.0], 1e-20, 1e-20);
        let r = acc.finish("nan", 1.0);
        assert!(!r.passed);
        assert!(r.max_rel.is_nan());
    }

    #[test]
    fn empty_report_fails() {
        assert!(!Accumulator::new().finish("empty", 1.0).passed);
    }

    #[test]
    fn worst_point_tracks_max() {
        let mut acc = Accumulator::new();
        acc.push(&[0.0], 1.0, 0.1);
        acc.push(&[1.0], 3.0, 0.3);
        acc.push(&[2.0], 2.0, 0.2);
        let r = acc.finish("w", 0.5);
        assert_eq!(r.worst_point, vec![1.0]);
        assert_eq!(r.max_abs, 3.0);
        assert!((r.mean_rel - 0.2).abs() < 1e-15);
        assert!(r.passed);
        assert!(!r.clone().with_check("side", false).passed);
    }
}
