use casimir_core::dilute::reduced_entropy_terms;
use casimir_core::validation::{run_suite, ClosedForms, Suite, ValidationOptions};
use casimir_core::Result;

fn flipped_ei_series(eta: f64, tau: f64) -> Result<f64> {
    let t = reduced_entropy_terms(eta, tau)?;
    Ok(t.elementary - t.ei_series)
}

const ENTROPY_CHECK: &str = "dilute entropy closed form vs -dF/dT";

#[test]
fn dilute_suite_catches_ei_series_sign_error() {
    let good = run_suite(Suite::Dilute, &ValidationOptions::default());
    let entropy = good.checks.iter().find(|c| c.name == ENTROPY_CHECK).unwrap();
    assert!(entropy.passed, "{entropy}");

    let opts = ValidationOptions {
        closed_forms: ClosedForms {
            entropy: flipped_ei_series,
            ..ClosedForms::STANDARD
        },
        ..ValidationOptions::default()
    };
    let bad = run_suite(Suite::Dilute, &opts);
    assert!(!bad.passed());
    let entropy = bad.checks.iter().find(|c| c.name == ENTROPY_CHECK).unwrap();
    assert!(!entropy.passed, "{entropy}");
}

#[test]
fn materials_suite_reports_fallback_mode() {
    let report = run_suite(Suite::Materials, &ValidationOptions::default());
    assert!(report.notes.iter().any(|n| n.contains("fallback")));
    assert!(report.checks.iter().all(|c| c.criterion == 10));
    assert!(report.passed(), "{report}");
}

#[test]
fn report_lists_every_check() {
    let report = run_suite(Suite::Materials, &ValidationOptions::default());
    let text = report.to_string();
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        report.checks.len()
    );
    assert!(text.ends_with("failed"));
}
