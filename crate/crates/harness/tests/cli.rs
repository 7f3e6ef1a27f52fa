use std::path::Path;
use std::process::{Command, Output};

fn subdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_spatial(out: &Path) -> Output {
    subdiff(&[
        "spatial",
        "--spatial-levels",
        "2,4",
        "--spatial-reference",
        "8",
        "--spatial-steps",
        "10",
        "--alpha",
        "0.5",
        "--scheme",
        "BE",
        "--out-dir",
        out.to_str().unwrap(),
    ])
}

#[test]
fn passing_run_exits_zero_and_writes_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = small_spatial(dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for ext in ["csv", "json", "md"] {
        assert!(dir.path().join(format!("spatial_case_a.{ext}")).is_file());
    }
    let csv = std::fs::read_to_string(dir.path().join("spatial_case_a.csv")).unwrap();
    assert!(csv.starts_with("case,scheme,alpha,level,refinement_param,error,pair_rate"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    small_spatial(a.path());
    small_spatial(b.path());
    for ext in ["csv", "md"] {
        let name = format!("spatial_case_a.{ext}");
        assert_eq!(
            std::fs::read(a.path().join(&name)).unwrap(),
            std::fs::read(b.path().join(&name)).unwrap()
        );
    }
}

#[test]
fn rate_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = subdiff(&[
        "temporal",
        "--alpha",
        "0.5",
        "--scheme",
        "BE",
        "--temporal-steps",
        "5,10",
        "--temporal-reference",
        "20",
        "--temporal-mesh",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("VIOLATION"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(subdiff(&["spatial", "--alpha", "abc"]).status.code(), Some(2));
    assert_eq!(subdiff(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        subdiff(&["temporal", "--temporal-reference", "100", "--temporal-steps", "30"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        subdiff(&["spatial", "--config", "/nonexistent/config.txt"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn light_diagnostics_pass_and_report_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("diag.conf");
    std::fs::write(
        &config,
        "# light sweep\ndiagnostic_alpha = 0.3, 0.7\ncriterion_samples = 100\nhardy_terms = 1000\n",
    )
    .unwrap();
    let out = subdiff(&[
        "diagnostics",
        "--config",
        config.to_str().unwrap(),
        "--symbol-samples",
        "100",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("diagnostics_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], serde_json::Value::Bool(true));
}
