//! The `semimed` binary: flags, exit codes and output files.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use semimed::cli::{PowerOutput, Report};
use semimed::*;

fn semimed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semimed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_csv(dir: &Path, d: &Dataset) -> PathBuf {
    let path = dir.join("data.csv");
    let mut w = csv::Writer::from_path(&path).unwrap();
    w.write_record(d.column_names()).unwrap();
    for i in 0..d.n() {
        let row: Vec<String> = d
            .column_names()
            .iter()
            .map(|c| d.column(c).unwrap()[i].to_string())
            .collect();
        w.write_record(&row).unwrap();
    }
    w.flush().unwrap();
    path
}

#[test]
fn ols_without_interaction_reports_three_effects_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = common::mediation_data(120, 1, 3);
    let data = write_csv(dir.path(), &d);
    let out = dir.path().join("r.json");
    let o = semimed(&[
        "mediate",
        "--data",
        data.to_str().unwrap(),
        "--treatment",
        "T",
        "--mediator",
        "M",
        "--outcome",
        "Y",
        "--covariates",
        "X0",
        "--method",
        "ols",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.schema_version, semimed::cli::SCHEMA_VERSION);
    let m = report.method("ols").unwrap();
    assert_eq!(m.effects.len(), 3);

    let lib = mediate(
        &d,
        &MediationRequest::new("T", "M", "Y")
            .covariates(&["X0"])
            .method(MethodChoice::Ols),
    )
    .unwrap();
    let e = lib.effects(Method::Ols).unwrap();
    for (i, row) in m.effects.iter().enumerate() {
        assert_eq!(row.estimate, e.values[i]);
        assert_eq!(row.ci_lower, e.ci_lower[i]);
        assert_eq!(row.ci_upper, e.ci_upper[i]);
    }
}

#[test]
fn both_methods_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_csv(dir.path(), &common::mediation_data(200, 0, 5));
    let run = |name: &str| {
        let svg = dir.path().join(name);
        let o = semimed(&[
            "mediate",
            "--data",
            data.to_str().unwrap(),
            "--treatment",
            "T",
            "--mediator",
            "M",
            "--outcome",
            "Y",
            "--interaction",
            "--plot",
            svg.to_str().unwrap(),
            "--out",
            dir.path().join("r.json").to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        std::fs::read_to_string(svg).unwrap()
    };
    let a = run("a.svg");
    assert_eq!(a.matches(r#"<g class="marker""#).count(), 10);
    assert!(a.contains("stroke-dasharray"));
    assert!(a.contains(r#"class="zero""#));
    assert_eq!(a, run("b.svg"));
    let report: Report =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(report.methods.iter().all(|m| m.effects.len() == 5));
    assert!(report
        .methods
        .iter()
        .all(|m| m.interaction_p_value.is_some()));
}

#[test]
fn unknown_column_is_a_usage_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_csv(dir.path(), &common::mediation_data(50, 0, 1));
    let out = dir.path().join("r.json");
    let o = semimed(&[
        "mediate",
        "--data",
        data.to_str().unwrap(),
        "--treatment",
        "T",
        "--mediator",
        "M",
        "--outcome",
        "missing",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn missing_file_is_an_io_error() {
    let o = semimed(&[
        "mediate",
        "--data",
        "/nonexistent/x.csv",
        "--treatment",
        "T",
        "--mediator",
        "M",
        "--outcome",
        "Y",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_writes_deterministic_tables() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let (out, log) = (
            dir.path().join(format!("m{tag}.csv")),
            dir.path().join(format!("l{tag}.csv")),
        );
        let o = semimed(&[
            "simulate",
            "--scenario",
            "gaussian",
            "--n",
            "100",
            "--reps",
            "8",
            "--seed",
            "1",
            "--out",
            out.to_str().unwrap(),
            "--log",
            log.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        (std::fs::read(out).unwrap(), std::fs::read(log).unwrap())
    };
    let (m1, l1) = run("1");
    let (m2, l2) = run("2");
    assert_eq!(m1, m2);
    assert_eq!(l1, l2);
    let text = String::from_utf8(m1).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with(
        "scenario,method,effect,bias,rmse,coverage,avg_length,success_rate,reps_used"
    ));
    assert_eq!(String::from_utf8(l1).unwrap().lines().count(), 1 + 8 * 10);
}

#[test]
fn unknown_scenario_lists_valid_ones() {
    let o = semimed(&["simulate", "--scenario", "cauchy", "--reps", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    for s in ["gaussian", "skewnormal", "asymmix", "symbimodal"] {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn power_single_replicate_and_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = semimed(&[
            "power",
            "--reps",
            "1",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let p: PowerOutput = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
        p
    };
    let mut a = run("a.json");
    let mut b = run("b.json");
    assert!((a.report.truth_acme0 + 0.0676).abs() < 1e-12);
    assert_eq!(a.report.n, 220);
    for m in &a.report.methods {
        assert!(m.rejection_rate == 0.0 || m.rejection_rate == 1.0);
    }
    a.metadata.generated_unix_seconds = 0;
    b.metadata.generated_unix_seconds = 0;
    assert_eq!(a, b);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(semimed(&["power", "--reps", "many"]).status.code(), Some(2));
    assert_eq!(semimed(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        semimed(&[
            "simulate",
            "--scenario",
            "gaussian",
            "--n",
            "10",
            "--reps",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(semimed(&["--help"]).status.code(), Some(0));
}

#[test]
fn single_method_svg_structure() {
    let d = common::mediation_data(100, 0, 2);
    let r = mediate(
        &d,
        &MediationRequest::new("T", "M", "Y").method(MethodChoice::Ols),
    )
    .unwrap();
    let svg =
        semimed::cli::render_forest_svg(&[(Method::Ols, r.effects(Method::Ols).unwrap())]).unwrap();
    assert_eq!(svg.matches(r#"<g class="marker""#).count(), 3);
    assert_eq!(svg.matches(r#"class="zero""#).count(), 1);
    assert!(!svg.contains("stroke-dasharray"));
}
