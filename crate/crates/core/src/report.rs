//! Pass/fail reports produced by the structural checks and comparisons.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Number of individual assertions evaluated.
    pub checked: usize,
    /// Located diagnostics for failures (capped).
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

const MAX_FAILURES: usize = 20;

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            checked: 0,
            failures: vec![],
            notes: vec![],
        }
    }

    pub fn ok(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.checked += 1;
        self.passed = false;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(msg.into());
        }
    }

    pub fn assert(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if cond {
            self.ok();
        } else {
            self.fail(msg());
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// A report with nothing checked is not a pass.
    pub fn conclusive(&self) -> bool {
        self.passed && self.checked > 0
    }

    pub fn merge(&mut self, o: CheckReport) {
        self.checked += o.checked;
        self.passed &= o.passed;
        for f in o.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(format!("{}: {f}", o.name));
            }
        }
        self.notes.extend(o.notes);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} checked)",
            self.name,
            if self.conclusive() { "pass" } else { "FAIL" },
            self.checked
        )?;
        for x in &self.failures {
            write!(f, "\n  - {x}")?;
        }
        Ok(())
    }
}
