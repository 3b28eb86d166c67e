//! Machine-readable pass/fail reports with witnesses.

use serde::Serialize;

/// Outcome of one checked statement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub statement: String,
    pub passed: bool,
    /// Human-readable evidence: the counterexample on failure, or the
    /// recorded witness for existence claims.
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(statement: impl Into<String>) -> Self {
        Self { statement: statement.into(), passed: true, witness: None }
    }

    pub fn fail(statement: impl Into<String>, witness: impl Into<String>) -> Self {
        Self { statement: statement.into(), passed: false, witness: Some(witness.into()) }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn from_bool(statement: impl Into<String>, passed: bool, witness: impl Into<String>) -> Self {
        if passed {
            Self::pass(statement)
        } else {
            Self::fail(statement, witness)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}
