//! Driver behavior: config validation, empty suites, report schema.

use cli::{run_suites, write_report, SuiteConfig};
use models::ModelConfig;

#[test]
fn empty_suite_list_gives_empty_passing_report() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.suites.clear();
    let report = run_suites(&cfg);
    assert_eq!(report.checks.len(), 0);
    assert_eq!(report.failed, 0);
}

#[test]
fn unknown_suite_rejected() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.suites = vec!["no-such-suite".into()];
    assert!(cfg.validate().is_err());
}

#[test]
fn bad_scaling_base_rejected_at_parse_stage() {
    let text = r#"{
        "model": {"kind": "scaling", "window_lo": -12, "window_hi": 12, "mu": 0.5},
        "suites": []
    }"#;
    let cfg: SuiteConfig = serde_json::from_str(text).unwrap();
    assert!(cfg.validate().is_err());
}

#[test]
fn nonpositive_tolerance_rejected() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.tolerances.insert("residue-norm".into(), -1.0);
    assert!(cfg.validate().is_err());
}

#[test]
fn report_entries_carry_one_provenance_tag_and_anchor() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.model = ModelConfig::Circle {
        cutoff: 16,
        inner_fraction: 0.5,
    };
    cfg.suites = vec!["hochschild".into(), "jlo-lemmas".into()];
    let report = run_suites(&cfg);
    assert!(!report.checks.is_empty());
    for c in &report.checks {
        assert!(
            ["anchored", "trivial", "derived"].contains(&c.provenance.as_str()),
            "bad tag {}",
            c.provenance
        );
        assert!(!c.anchor.is_empty());
        if c.provenance == "derived" {
            assert!(c.oracle.is_some(), "derived check {} names no oracle", c.name);
        }
    }
    let dir = std::env::temp_dir().join("twistbench_driver_test");
    let path = write_report(&report, &dir).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(parsed.get("checks").is_some());
}

#[test]
fn reports_are_deterministic_for_fixed_seed() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.model = ModelConfig::Circle {
        cutoff: 16,
        inner_fraction: 0.5,
    };
    cfg.suites = vec!["symbolic-identities".into()];
    let a = serde_json::to_string(&run_suites(&cfg).checks).unwrap();
    let b = serde_json::to_string(&run_suites(&cfg).checks).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scan_tables_have_headers() {
    let mut cfg = SuiteConfig::default_circle();
    cfg.model = ModelConfig::Circle {
        cutoff: 12,
        inner_fraction: 0.5,
    };
    let dir = std::env::temp_dir().join("twistbench_scan_test");
    let p = cli::scans::scan_family(&cfg, &dir).unwrap();
    let text = std::fs::read_to_string(p).unwrap();
    assert!(text.starts_with("u,re,im"));
    let p = cli::scans::scan_epsilon(&cfg, &dir).unwrap();
    let text = std::fs::read_to_string(p).unwrap();
    assert!(text.starts_with("epsilon,re,im"));
}
