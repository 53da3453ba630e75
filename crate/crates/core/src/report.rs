//! Named pass/fail checks with witnesses, shared by the validators.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Concrete counterexamples; empty when the check passed.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check that passes iff `witnesses` is empty.
    pub fn record(&mut self, name: impl Into<String>, witnesses: Vec<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed: witnesses.is_empty(),
            witnesses,
        });
    }

    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "overall": self.overall(),
            "checks": self.checks,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}", c.name)?;
            for w in c.witnesses.iter().take(20) {
                writeln!(f, "       {w}")?;
            }
            if c.witnesses.len() > 20 {
                writeln!(f, "       ... {} more", c.witnesses.len() - 20)?;
            }
        }
        write!(
            f,
            "overall: {}",
            if self.overall() { "pass" } else { "fail" }
        )
    }
}
