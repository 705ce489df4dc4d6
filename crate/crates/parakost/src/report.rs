use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Infeasible => "INFEASIBLE",
        })
    }
}

/// Outcome of one verification suite. Timing is left to the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub n: usize,
    pub status: Status,
    pub cases_run: u64,
    /// Cases that failed; only the first is kept as the counterexample.
    pub failures: u64,
    pub counterexample: Option<String>,
    /// Computed quantities worth reporting, in insertion order.
    pub details: Vec<(String, String)>,
}

impl Report {
    pub fn new(check: &str, n: usize) -> Self {
        Report {
            check: check.into(),
            n,
            status: Status::Pass,
            cases_run: 0,
            failures: 0,
            counterexample: None,
            details: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Counts one case; on failure records the first counterexample.
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.cases_run += 1;
        if !ok {
            self.fail(what());
        }
        ok
    }

    pub fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
        if self.counterexample.is_none() {
            self.counterexample = Some(what);
        }
    }

    pub fn infeasible(&mut self, what: String) {
        if self.status == Status::Pass {
            self.status = Status::Infeasible;
            self.counterexample = Some(what);
        }
    }

    pub fn detail(&mut self, key: &str, value: impl fmt::Display) {
        self.details.push((key.into(), alloc::format!("{value}")));
    }

    /// Like [`Report::absorb`] but prefixes the sub-report's detail keys.
    pub fn absorb_as(&mut self, prefix: &str, mut other: Report) {
        for (k, _) in other.details.iter_mut() {
            *k = alloc::format!("{prefix}.{k}");
        }
        if let Some(c) = other.counterexample.as_mut() {
            *c = alloc::format!("[{prefix}] {c}");
        }
        self.absorb(other);
    }

    /// Folds a sub-report into this one.
    pub fn absorb(&mut self, other: Report) {
        self.cases_run += other.cases_run;
        self.failures += other.failures;
        if other.status != Status::Pass && self.status == Status::Pass {
            self.status = other.status;
            self.counterexample = other.counterexample;
        }
        self.details.extend(other.details);
    }
}
