//! Pass/fail bookkeeping shared by every verification suite.

use serde::Serialize;

/// Only the first few counterexamples are kept; `failed` has the full count.
const KEEP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub trials: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            trials: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEEP {
                self.failures.push(why());
            }
        }
    }

    /// Records an error from the engine itself as a failed trial.
    pub fn record_result<T>(&mut self, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(false, || format!("error: {e}"));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.check = format!("{prefix}/{}", self.check);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub engine: &'static str,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl Report {
    /// Checks are sorted by name so output does not depend on evaluation order.
    pub fn new(suite: impl Into<String>, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        Report {
            schema: 1,
            engine: env!("CARGO_PKG_VERSION"),
            suite: suite.into(),
            passed: checks.iter().all(CheckReport::passed),
            checks,
        }
    }
}
