use std::fmt;

use serde::Serialize;

use crate::report::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

/// The outcome of one machine check: every sub-check with its verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instance: String,
    pub checks: Vec<SubCheck>,
    pub passed: bool,
}

impl TheoremReport {
    pub fn new(theorem: impl Into<String>, instance: impl Into<String>) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            instance: instance.into(),
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(SubCheck {
            name: name.into(),
            passed,
            detail: detail.into(),
            violations: Vec::new(),
        });
    }

    /// A sub-check that passes iff `report` is empty.
    pub fn laws(&mut self, name: impl Into<String>, report: ValidationReport) {
        let passed = report.is_ok();
        self.passed &= passed;
        self.checks.push(SubCheck {
            name: name.into(),
            passed,
            detail: if passed { "ok".into() } else { format!("{} violation(s)", report.len()) },
            violations: report.violations,
        });
    }

    /// Records two counts that must agree.
    pub fn counts(&mut self, name: impl Into<String>, left: usize, right: usize) {
        self.check(name, left == right, format!("{left} vs {right}"));
    }

    pub fn failed(&self) -> impl Iterator<Item = &SubCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} on {}: {}",
            self.theorem,
            self.instance,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail)?;
            for v in &c.violations {
                let names: Vec<String> = v.witness.iter().map(|n| n.to_string()).collect();
                writeln!(f, "      {:?} at [{}]: {}", v.law, names.join(", "), v.detail)?;
            }
        }
        Ok(())
    }
}
