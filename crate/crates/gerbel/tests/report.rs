use gerbel::{demos, parse_document, RunReport, Status, TaskResult};
use gerbel_core::Report;
use proptest::prelude::*;
use serde_json::{json, Map};

fn report_with(residuals: &[f64]) -> RunReport {
    let mut r = Report::new();
    for (k, &x) in residuals.iter().enumerate() {
        r.push(
            format!("Y^[4] point ({k},0,1,2)"),
            "mu_134 (id ⊠ mu_123) = mu_124 (mu_234 ⊠ id)",
            x,
        );
    }
    let mut info = Map::new();
    info.insert("fibre_dim".into(), json!(4));
    RunReport::new(vec![
        TaskResult::new("check-2vb", "V", r, info),
        TaskResult::new("check-gerbe", "Q", Report::new(), Map::new()),
    ])
}

#[test]
fn non_finite_residuals_round_trip() {
    let report = report_with(&[1.0, f64::INFINITY, f64::NEG_INFINITY, 3.5e-7]);
    let text = report.to_json();
    assert!(text.contains("\"inf\"") && text.contains("\"-inf\""));
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.status, Status::Fail);
    assert_eq!(back.violations[0].location, "V: Y^[4] point (0,0,1,2)");

    let nan = report_with(&[f64::NAN]);
    let back: RunReport = serde_json::from_str(&nan.to_json()).unwrap();
    assert!(back.violations[0].residual.is_nan());
}

#[test]
fn passing_report_has_no_violations() {
    let report = report_with(&[]);
    assert!(report.passed());
    assert!(report.to_text().starts_with("PASS check-2vb V\n"));
}

#[test]
fn shipped_demos_parse_and_reserialize() {
    for (name, text) in demos::DEMOS {
        let doc = parse_document(text, name).unwrap();
        let again = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_document(&again, name).unwrap(), doc, "{name}");
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let err =
        parse_document(r#"{"version": "1", "declarations": {"gerbs": {}}}"#, "doc").unwrap_err();
    assert!(err.to_string().contains("gerbs"));
}

proptest! {
    #[test]
    fn finite_residuals_round_trip_exactly(xs in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 0..8)) {
        let report = report_with(&xs);
        let back: RunReport = serde_json::from_str(&report.to_json()).unwrap();
        prop_assert_eq!(back, report);
    }
}
