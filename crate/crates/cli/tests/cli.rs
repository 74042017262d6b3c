use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cvqnn() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cvqnn"));
    cmd.env_remove("CVQNN_OUT_DIR");
    cmd
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, body).unwrap();
    path
}

const MINIMAL: &str = "seeds = 1\ndepths = [1]\nactivations = []\n[optimizer]\nepochs = 50\n";

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    cvqnn()
        .arg("run")
        .arg(config)
        .arg("--out-dir")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn minimal_run_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&write_config(dir.path(), MINIMAL), &out, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut files: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["aggregates.csv", "curve_qnn-l1_sine.csv", "runs.csv"]);
    let curve = fs::read_to_string(out.join("curve_qnn-l1_sine.csv")).unwrap();
    assert_eq!(curve.lines().next(), Some("x,y_pred,y_true"));
    assert_eq!(curve.lines().count(), 201);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.starts_with("model_id"));
    assert!(stdout.contains("qnn-l1"));
}

#[test]
fn negative_learning_rate_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{MINIMAL}learning_rate = -0.01\n"));
    let o = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("learning_rate"), "{}", stderr(&o));
}

#[test]
fn unknown_key_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seeds = 1\nlayers = 3\n");
    let o = run(&cfg, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("layers") && err.contains("line 2"), "{err}");
}

#[test]
fn overrides_take_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&write_config(dir.path(), MINIMAL), &out, &["--seeds", "2", "--optimizer.epochs", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 3);

    let o = run(&write_config(dir.path(), MINIMAL), &out, &["--no-such-key", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no_such_key"), "{}", stderr(&o));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-env");
    let o = cvqnn()
        .arg("run")
        .arg(write_config(dir.path(), MINIMAL))
        .env("CVQNN_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("runs.csv").exists());
}

#[test]
fn report_reproduces_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "seeds = 2\ndepths = [1, 2]\n[optimizer]\nepochs = 20\n");
    assert!(run(&cfg, &out, &[]).status.success());
    let before = fs::read_to_string(out.join("aggregates.csv")).unwrap();
    let o = cvqnn().arg("report").arg(&out).arg("--svg").output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join("aggregates.csv")).unwrap(), before);
    assert!(out.join("mse_vs_layers_sine.svg").exists());
}

#[test]
fn report_on_empty_runs_warns() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("runs.csv"),
        "model_id,target,strategy,layers,params,activation,seed,train_mse,test_mse,leakage_flag,runtime_s\n",
    )
    .unwrap();
    let o = cvqnn().arg("report").arg(dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
    let agg = fs::read_to_string(dir.path().join("aggregates.csv")).unwrap();
    assert_eq!(agg.lines().count(), 1);
}

#[test]
fn report_rejects_tampered_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "seeds = 2\ndepths = [1]\nactivations = []\n[optimizer]\nepochs = 5\n");
    assert!(run(&cfg, &out, &[]).status.success());
    let runs = out.join("runs.csv");
    let text = fs::read_to_string(&runs).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<&str> = lines[2].split(',').collect();
    fields[8] = "not-a-number";
    lines[2] = fields.join(",");
    fs::write(&runs, lines.join("\n")).unwrap();
    let o = cvqnn().arg("report").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 2"), "{}", stderr(&o));

    let missing = cvqnn().arg("report").arg(dir.path().join("nope")).output().unwrap();
    assert!(!missing.status.success());
}

#[test]
fn selftest_modes() {
    let listed = cvqnn().args(["selftest", "--list"]).output().unwrap();
    assert!(listed.status.success());
    let names = String::from_utf8_lossy(&listed.stdout);
    assert!(names.lines().any(|l| l == "squeezed-variance"));

    let ok = cvqnn().arg("selftest").output().unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).matches("PASS").count(), names.lines().count());

    let truncated = cvqnn().args(["selftest", "--cutoff", "2"]).output().unwrap();
    assert!(!truncated.status.success());
    assert!(String::from_utf8_lossy(&truncated.stdout).contains("FAIL squeezed-variance"));

    let bad = cvqnn().args(["selftest", "--cutoff", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cvqnn().output().unwrap().status.code(), Some(1));
    assert_eq!(cvqnn().arg("frobnicate").output().unwrap().status.code(), Some(1));
    assert_eq!(cvqnn().arg("--help").output().unwrap().status.code(), Some(0));
}
