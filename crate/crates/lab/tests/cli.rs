use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn eckhaus(cmd: &str, dir: &Path, config: &str) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_eckhaus")).arg(cmd).arg(&path).output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_columns(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let unknown = eckhaus("spectrum", dir.path(), "[params]\nalpha = 1.0\nbeta = 0.0\ncolour = 3\n");
    assert_eq!(unknown.status.code(), Some(2));
    let missing = eckhaus("spectrum", dir.path(), "[params]\nalpha = 1.0\n");
    assert_eq!(missing.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    let bad_eps = eckhaus("coeffs", dir.path(), "[params]\nalpha = 1.0\nbeta = 0.0\nepsilon = -1.0\n");
    assert_eq!(bad_eps.status.code(), Some(2));
}

#[test]
fn spectrum_of_the_real_equation() {
    let dir = TempDir::new().unwrap();
    let out = eckhaus("spectrum", dir.path(), "points = 401\n\n[params]\nalpha = 0.0\nbeta = 0.0\n");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&dir.path().join("out/summary.json"));
    assert!((s["zeta_bd_squared"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let (header, rows) = csv_columns(&dir.path().join("out/dispersion.csv"));
    assert_eq!(header[0], "k");
    let n = rows.len();
    for i in 0..n {
        let (a, b) = (&rows[i], &rows[n - 1 - i]);
        assert_eq!(a[0], -b[0]);
        assert_eq!(a[1], b[1]);
        assert_eq!(a[2], -b[2]);
    }
    let m = json(&dir.path().join("out/manifest.json"));
    assert_eq!(m["command"], "spectrum");
    assert!(dir.path().join("out/config.resolved.toml").exists());
}

const ZERO: &str = r#"
system = "modulation"
initial = "zero"
n_xi = 64

[params]
alpha = 1.0
beta = 0.0
epsilon = 0.2

[stepper]
dt = 0.5
t_end = 5.0
record_stride = 5
"#;

#[test]
fn zero_data_gives_zero_files() {
    let dir = TempDir::new().unwrap();
    let out = eckhaus("simulate", dir.path(), ZERO);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = csv_columns(&dir.path().join("out/final_fourier.csv"));
    assert!(rows.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
    let snaps: Vec<_> = fs::read_dir(dir.path().join("out/trajectory")).unwrap().collect();
    assert_eq!(snaps.len(), 3);
    for e in snaps {
        let (header, rows) = csv_columns(&e.unwrap().path());
        assert_eq!(header, ["x", "psi", "s"]);
        assert!(rows.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
    }
    assert_eq!(json(&dir.path().join("out/manifest.json"))["metrics"]["drift"], 0.0);
}

#[test]
fn wave_train_runs_stay_on_the_orbit_and_repeat_exactly() {
    let config = r#"
system = "cgl"
initial = "wave-train"
n_xi = 64
snapshots = false

[params]
alpha = 1.0
beta = 0.0
epsilon = 0.2

[stepper]
dt = 0.01
t_end = 20.0
record_stride = 100
"#;
    let dir = TempDir::new().unwrap();
    let out = eckhaus("simulate", dir.path(), config);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let drift = json(&dir.path().join("out/manifest.json"))["metrics"]["drift"].as_f64().unwrap();
    assert!(drift < 1e-7, "drift {drift}");
    let first = fs::read(dir.path().join("out/final_fourier.csv")).unwrap();
    let times = fs::read(dir.path().join("out/times.csv")).unwrap();
    let bin = fs::read(dir.path().join("out/final.bin")).unwrap();
    eckhaus("simulate", dir.path(), config);
    assert_eq!(first, fs::read(dir.path().join("out/final_fourier.csv")).unwrap());
    assert_eq!(times, fs::read(dir.path().join("out/times.csv")).unwrap());
    assert_eq!(bin, fs::read(dir.path().join("out/final.bin")).unwrap());
}

#[test]
fn failure_configuration_reports_the_expected_failure() {
    let config = r#"
mode = "failure"

[plan]
alpha = 4.0
beta = 1.0
n_xi = 128
tau1 = 0.25
records = 20
"#;
    let dir = TempDir::new().unwrap();
    let out = eckhaus("validate", dir.path(), config);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("failure demonstrated (expected)"));
    assert_eq!(json(&dir.path().join("out/failure.json"))["failure_detected"], true);
    assert_eq!(json(&dir.path().join("out/control.json"))["failure_detected"], false);
    assert!(dir.path().join("out/reference_summary.csv").exists());
}

#[test]
fn coefficient_tables_are_written() {
    let dir = TempDir::new().unwrap();
    let out = eckhaus("coeffs", dir.path(), "[params]\nalpha = 1.0\nbeta = 0.0\n");
    assert_eq!(out.status.code(), Some(0));
    let c = json(&dir.path().join("out/coeffs.json"));
    assert_eq!(c["ansatz"]["gamma_non"], -1.0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("gamma_lin"));
}
