//! Runs the twelve acceptance criteria one after another, at their
//! tolerances and time limits, and prints one line per criterion.

use std::io::Write;

use sheafex::suite::{run_criterion, SuiteOptions, COUNT};

#[test]
fn acceptance_battery() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for id in 1..=COUNT {
        let outcome = run_criterion(id, opts).expect("known criterion");
        // straight to stdout so the lines show without --nocapture
        let mut out = std::io::stdout().lock();
        writeln!(out, "{outcome}").unwrap();
        out.flush().unwrap();
        if !outcome.pass {
            failed.push(outcome.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
