//! Pass/fail records with measured residuals.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check that passes iff `residual` is finite and ≤ `threshold`.
    pub fn record(&mut self, name: impl Into<String>, residual: f64, threshold: f64) -> &mut CheckResult {
        let pass = residual.is_finite() && residual <= threshold;
        self.checks.push(CheckResult { name: name.into(), residual, threshold, pass, detail: None });
        self.checks.last_mut().expect("just pushed")
    }

    pub fn record_detail(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        threshold: f64,
        detail: impl Into<String>,
    ) {
        self.record(name, residual, threshold).detail = Some(detail.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Prefixes every check name with `scope/`.
    pub fn scoped(mut self, scope: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{scope}/{}", c.name);
        }
        self
    }
}
