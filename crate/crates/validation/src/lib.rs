//! Acceptance checks with a PASS/FAIL verdict per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

/// Outcome of one criterion: a list of named checks plus free-form notes.
#[derive(Debug, Default)]
pub struct Verdict {
    checks: Vec<(String, bool)>,
    notes: Vec<String>,
}

impl Verdict {
    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.checks.push((name.into(), ok));
        ok
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str())
    }
}

pub type Criterion = (&'static str, fn(&mut Verdict));

/// Runs each criterion, prints its verdict line and details, and returns
/// whether all of them passed. A panic counts as a failure.
pub fn run_all(criteria: &[Criterion]) -> bool {
    let mut all = true;
    let mut summary = Vec::new();
    for (k, (title, body)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut verdict = Verdict::default();
        let outcome = catch_unwind(AssertUnwindSafe(|| body(&mut verdict)));
        let elapsed = start.elapsed().as_secs_f64();
        if let Err(payload) = outcome {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict.check(format!("completed without panic ({msg})"), false);
        }
        let passed = verdict.passed();
        all &= passed;
        let line = format!("criterion {}: {} - {title} ({elapsed:.2} s)", k + 1, if passed { "PASS" } else { "FAIL" });
        println!("{line}");
        for note in &verdict.notes {
            println!("    {note}");
        }
        for (name, ok) in &verdict.checks {
            println!("    [{}] {name}", if *ok { "ok" } else { "FAILED" });
        }
        summary.push(line);
    }
    println!();
    for line in summary {
        println!("{line}");
    }
    all
}
