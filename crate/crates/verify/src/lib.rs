//! The acceptance suite: one check per criterion, each returning a
//! pass/fail verdict with a one-line summary of what was measured.
//!
//! Monte Carlo checks accept when `mean ≥ bound − 3·SE`; exact checks
//! enumerate every outcome.

use std::fmt;
use std::time::{Duration, Instant};

pub mod axioms;
pub mod chi2;
mod criteria;
pub mod enumerate;

pub use criteria::CRITERIA;

/// What a check found.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    /// Wall-clock budget.
    pub limit: Duration,
    pub check: fn() -> misp::Result<Outcome>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Criterion {
    /// Runs the check; an error or a blown time budget is a failure.
    pub fn run(&self) -> Verdict {
        let start = Instant::now();
        let outcome = (self.check)().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= self.limit;
        let detail = if in_time {
            outcome.detail
        } else {
            format!("{} (over the {:?} budget)", outcome.detail, self.limit)
        };
        Verdict { id: self.id, title: self.title, passed: outcome.passed && in_time, detail, elapsed, limit: self.limit }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {:<28} {:>7.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Criteria whose id is in `only` (all of them when `only` is empty).
pub fn select(only: &[usize]) -> Vec<&'static Criterion> {
    CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)).collect()
}

/// Runs the selected criteria in order, handing each verdict to `sink`.
pub fn run(only: &[usize], mut sink: impl FnMut(&Verdict)) -> Vec<Verdict> {
    select(only)
        .into_iter()
        .map(|c| {
            let v = c.run();
            sink(&v);
            v
        })
        .collect()
}
