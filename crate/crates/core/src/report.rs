//! Verification reports: one entry per check with its worst residual.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub parameters: Map<String, Value>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Builds a parameter map from `(key, value)` pairs.
#[macro_export]
macro_rules! params {
    ($($k:expr => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = serde_json::Map::new();
        $( m.insert($k.to_string(), serde_json::json!($v)); )*
        m
    }};
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Records a residual; non-finite residuals fail.
    pub fn residual(&mut self, check: &str, parameters: Map<String, Value>, max_residual: f64, tolerance: f64) {
        let pass = max_residual.is_finite() && max_residual <= tolerance;
        self.checks.push(Check { check: check.to_string(), parameters, max_residual, tolerance, pass });
    }

    /// Records an exact yes/no check (residual 0 or 1, tolerance 0).
    pub fn exact(&mut self, check: &str, parameters: Map<String, Value>, pass: bool) {
        let max_residual = if pass { 0.0 } else { 1.0 };
        self.checks.push(Check { check: check.to_string(), parameters, max_residual, tolerance: 0.0, pass });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Worst residual among checks with the given name.
    pub fn worst(&self, check: &str) -> Option<f64> {
        self.checks.iter().filter(|c| c.check == check).map(|c| c.max_residual).reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_logic() {
        let mut r = Report::new();
        r.residual("a", params! {"k" => 1}, 1e-12, 1e-9);
        assert!(r.all_pass());
        r.residual("a", params! {}, f64::NAN, 1e-9);
        assert!(!r.all_pass());
        assert_eq!(r.failures().count(), 1);
        r.exact("b", params! {}, true);
        assert_eq!(r.worst("b"), Some(0.0));
    }
}
