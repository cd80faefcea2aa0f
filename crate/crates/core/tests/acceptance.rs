//! Acceptance gate: runs every verification suite at desk scale and checks
//! each criterion at its pinned tolerance, printing one line per criterion.
//!
//! Run with `cargo test -p outerpress --test acceptance -- --nocapture` to
//! see the margins.

use outerpress::harness::{run_suite, Suite};

#[test]
fn acceptance_criteria() {
    let mut all = Vec::new();
    for suite in Suite::all() {
        println!("== suite: {} ==", suite.name());
        let results = run_suite(suite)
            .unwrap_or_else(|e| panic!("suite '{}' failed to execute: {e}", suite.name()));
        for r in &results {
            println!(
                "{} {}: {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            );
        }
        all.extend(results);
    }
    let failed: Vec<&str> = all.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    assert!(
        failed.is_empty(),
        "acceptance criteria failed: {failed:?} (re-run with --nocapture for margins)"
    );
}
