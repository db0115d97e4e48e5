//! End-to-end tests of the `cluster` binary: flag validation, exit codes,
//! output layout, determinism and artifact inspection.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cluster"))
}

fn write_dataset(dir: &Path) -> PathBuf {
    let path = dir.join("blobs.csv");
    let mut text = String::from("x,y,label\n");
    for i in 0..20 {
        let jitter = (i % 5) as f64 * 0.1;
        text.push_str(&format!("{:.2},{:.2},a\n", jitter, 0.5 + jitter));
    }
    for i in 0..20 {
        let jitter = (i % 5) as f64 * 0.1;
        text.push_str(&format!("{:.2},{:.2},b\n", 10.0 + jitter, 9.5 + jitter));
    }
    std::fs::write(&path, text).unwrap();
    path
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "expected success for {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn rejects_invalid_n_v_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out = bin()
        .args([
            "run",
            "--data",
            data.to_str().unwrap(),
            "--labels",
            "label",
            "--algo",
            "qaca",
            "--n-v",
            "0",
            "--out",
            tmp.path().join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("n_v"), "stderr was: {stderr}");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn missing_dataset_exits_one_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let out = bin()
        .args([
            "run",
            "--data",
            tmp.path().join("nope.csv").to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    assert!(!out_dir.exists());
}

#[test]
fn unknown_flag_exits_one() {
    let out = bin().args(["run", "--frobnicate"]).output().unwrap();
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn full_run_writes_reports_and_assignments() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out_dir = tmp.path().join("out");
    run_ok(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--labels",
        "label",
        "--algo",
        "all",
        "--m",
        "2",
        "--distance-mode",
        "squared_euclidean",
        "--seeds",
        "1,2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    for file in [
        "config.json",
        "report.json",
        "report.txt",
        "assignments_seed1.csv",
        "assignments_seed2.csv",
    ] {
        assert!(out_dir.join(file).exists(), "missing {file}");
    }
    let table = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert!(table.contains("Algorithm comparison"));
    assert!(table.contains("EM (published, not reproduced)"));
    assert!(table.contains("k-means"));
    assert!(table.contains("SOFM"));
    assert!(table.contains("QACA"));

    let csv = std::fs::read_to_string(out_dir.join("assignments_seed1.csv")).unwrap();
    assert!(csv.starts_with("instance_index,definite,p_1,p_2,prob2_valid,all_off"));
    assert_eq!(csv.lines().count(), 41); // header + 40 instances
}

#[test]
fn flags_override_config_file_and_echo_resolved_values() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let config_path = tmp.path().join("config.json");
    std::fs::write(
        &config_path,
        format!(
            r#"{{"data": "{}", "labels": "label", "algo": "qaca", "m": 2, "epsilon": 0.5, "seeds": [9]}}"#,
            data.display()
        ),
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    run_ok(&[
        "run",
        "--config",
        config_path.to_str().unwrap(),
        "--epsilon",
        "0.75",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let echoed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("config.json")).unwrap())
            .unwrap();
    assert_eq!(echoed["kind"], "run_config");
    assert_eq!(echoed["payload"]["epsilon"], 0.75); // flag beats file
    assert_eq!(echoed["payload"]["m"], 2); // file beats default
    assert_eq!(echoed["payload"]["seeds"], serde_json::json!([9]));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("config.json");
    std::fs::write(&config_path, r#"{"mystery_knob": 3}"#).unwrap();
    let out = bin()
        .args(["run", "--config", config_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mystery_knob"), "stderr was: {stderr}");
}

#[test]
fn repeat_runs_re_produce_identical_json_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let args = |out: &Path| {
        vec![
            "run".to_string(),
            "--data".into(),
            data.to_str().unwrap().into(),
            "--labels".into(),
            "label".into(),
            "--algo".into(),
            "all".into(),
            "--m".into(),
            "2".into(),
            "--seeds".into(),
            "3,4".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let out_a = tmp.path().join("a");
    let out_b = tmp.path().join("b");
    run_ok(&args(&out_a).iter().map(String::as_str).collect::<Vec<_>>());
    run_ok(&args(&out_b).iter().map(String::as_str).collect::<Vec<_>>());
    let report_a = std::fs::read(out_a.join("report.json")).unwrap();
    let report_b = std::fs::read(out_b.join("report.json")).unwrap();
    assert_eq!(report_a, report_b);
    let csv_a = std::fs::read(out_a.join("assignments_seed3.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("assignments_seed3.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
}

#[test]
fn dump_flags_emit_probability_lines_and_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out_dir = tmp.path().join("out");
    run_ok(&[
        "run",
        "--data",
        data.to_str().unwrap(),
        "--labels",
        "label",
        "--algo",
        "qaca",
        "--m",
        "2",
        "--distance-mode",
        "squared_euclidean",
        "--seeds",
        "1",
        "--dump-assignments",
        "--dump-artifacts",
        "--dump-icm",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let probs = std::fs::read_to_string(out_dir.join("probabilities_seed1.txt")).unwrap();
    assert!(probs.starts_with("instance 0 probabilities: "));
    assert!(out_dir.join("assignments_seed1.jsonl").exists());
    assert!(out_dir.join("geometry_seed1.json").exists());
    assert!(out_dir.join("cluster_form_seed1.json").exists());

    // inspect the artifacts it just wrote
    let geo = run_ok(&[
        "inspect",
        out_dir.join("geometry_seed1.json").to_str().unwrap(),
    ]);
    let text = String::from_utf8_lossy(&geo.stdout);
    assert!(text.contains("geometry: m=2"), "got: {text}");

    let cf = run_ok(&[
        "inspect",
        out_dir.join("cluster_form_seed1.json").to_str().unwrap(),
    ]);
    let text = String::from_utf8_lossy(&cf.stdout);
    assert!(text.contains("intra entries"), "got: {text}");
    assert!(text.contains("inter entries"), "got: {text}");

    let rep = run_ok(&["inspect", out_dir.join("report.json").to_str().unwrap()]);
    let text = String::from_utf8_lossy(&rep.stdout);
    assert!(text.contains("QACA"), "got: {text}");

    let icm = run_ok(&[
        "inspect",
        out_dir.join("icm_seed1_instance0.json").to_str().unwrap(),
    ]);
    let text = String::from_utf8_lossy(&icm.stdout);
    assert!(text.contains("instance matrix: n=4"), "got: {text}");
    assert!(text.contains("std=1.0"), "got: {text}");
}

#[test]
fn unwritable_output_directory_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let blocker = tmp.path().join("blocker");
    std::fs::write(&blocker, b"file, not a directory").unwrap();
    let out = bin()
        .args([
            "run",
            "--data",
            data.to_str().unwrap(),
            "--labels",
            "label",
            "--algo",
            "kmeans",
            "--m",
            "2",
            "--seeds",
            "1",
            "--out",
            blocker.join("sub").join("out").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn inspect_rejects_truncated_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("broken.json");
    std::fs::write(&path, r#"{"schema_version": 1, "kind": "geometry""#).unwrap();
    let out = bin()
        .args(["inspect", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);

    std::fs::write(
        &path,
        r#"{"schema_version": 99, "kind": "geometry", "payload": {}}"#,
    )
    .unwrap();
    let out = bin()
        .args(["inspect", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema_version"));
}

#[test]
fn env_var_sets_the_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_dataset(tmp.path());
    let out_dir = tmp.path().join("from-env");
    let out = bin()
        .env("QACA_OUT_DIR", out_dir.to_str().unwrap())
        .args([
            "run",
            "--data",
            data.to_str().unwrap(),
            "--labels",
            "label",
            "--algo",
            "kmeans",
            "--m",
            "2",
            "--seeds",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out_dir.join("report.json").exists());
}
