use std::process::ExitCode;
use std::time::Instant;

use casimir_core::validation::{run_suite, Suite, ValidationOptions};

const CRITERIA: u32 = 11;

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_suite(Suite::All, &ValidationOptions::default());
    for note in &report.notes {
        println!("note: {note}");
    }
    for c in &report.checks {
        println!("    {c}");
    }
    let mut failed = 0;
    for k in 1..=CRITERIA {
        let checks: Vec<_> = report.checks.iter().filter(|c| c.criterion == k).collect();
        let ok = !checks.is_empty() && checks.iter().all(|c| c.passed);
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {k:>2}: {} ({}/{} checks)",
            if ok { "PASS" } else { "FAIL" },
            checks.iter().filter(|c| c.passed).count(),
            checks.len()
        );
    }
    println!(
        "acceptance: {} of {CRITERIA} criteria passed in {:.1} s",
        CRITERIA - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
