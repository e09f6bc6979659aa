//! Verification suites: each turns a quantitative claim into a pass/fail
//! check at desk scale, with witnesses for failures and a distinct
//! inconclusive status for enclosure-undecided comparisons.

pub mod dubickas;
pub mod oracle;
pub mod suites;

use std::fmt;

pub use dubickas::{dubickas_constants, dubickas_intervals, DubickasConstants};
pub use oracle::oracle_enumerate;
pub use suites::{
    monotone_suite, suite_extremal, suite_negative, suite_positive, ContainmentSuiteParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "FAIL"),
            Status::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub detail: String,
    pub status: Status,
    /// Concrete witness for failures (index, word, value...).
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerdictReport {
    pub suite: String,
    pub params: String,
    pub checks: Vec<Check>,
}

impl VerdictReport {
    pub fn new(suite: impl Into<String>, params: impl Into<String>) -> Self {
        VerdictReport { suite: suite.into(), params: params.into(), checks: Vec::new() }
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        detail: impl Into<String>,
        status: Status,
        witness: Option<String>,
    ) {
        self.checks.push(Check { id: id.into(), detail: detail.into(), status, witness });
    }

    pub fn pass(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.push(id, detail, Status::Pass, None);
    }

    pub fn fail(&mut self, id: impl Into<String>, detail: impl Into<String>, witness: String) {
        self.push(id, detail, Status::Fail, Some(witness));
    }

    pub fn inconclusive(
        &mut self,
        id: impl Into<String>,
        detail: impl Into<String>,
        witness: String,
    ) {
        self.push(id, detail, Status::Inconclusive, Some(witness));
    }

    pub fn verdict(&mut self, id: impl Into<String>, detail: impl Into<String>, ok: bool, witness: String) {
        if ok {
            self.pass(id, detail);
        } else {
            self.fail(id, detail, witness);
        }
    }

    /// Deterministic assembly order.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn inconclusive_count(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Inconclusive).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0 && self.inconclusive_count() == 0
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} [{}]", self.suite, self.params)?;
        for c in &self.checks {
            write!(f, "  {:<28} {:<12} {}", c.id, c.status.to_string(), c.detail)?;
            if let Some(w) = &c.witness {
                write!(f, "  witness: {w}")?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "  => {} checks, {} failed, {} inconclusive",
            self.checks.len(),
            self.failed(),
            self.inconclusive_count()
        )
    }
}
