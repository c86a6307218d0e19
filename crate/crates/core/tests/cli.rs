use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nc-orlicz")).args(args).current_dir(dir).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const DIAG_3_4: &str = r#"{"blocks":[{"weight":1.0,"matrix":[[[3,0],[0,0]],[[0,0],[4,0]]]}]}"#;

const SPIKE_CONFIG: &str = r#"
phi = "power:2"
length = 60
seed = 7
eps = [1.0, 0.1]
tol = 1e-2
output = "records.csv"

[base]
source = "diagonal"
blocks = [{ dim = 2, weight = 1.0 }]
diagonals = [[1.0, 1.0]]

[family]
kind = "spike_perturbation"
amplitudes = { rule = "power", coefficient = 1.0, exponent = 0.25 }
traces = { rule = "power", coefficient = 1.0, exponent = -6.0 }
"#;

#[test]
fn norm_of_diag_3_4_is_5() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.json"), DIAG_3_4).unwrap();
    let out = run(&["norm", "x.json", "--phi", "power:2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((report["value"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert_eq!(report["method"], "luxemburg");

    let out = run(&["norm", "x.json", "--phi", "power:2", "--method", "p:2"], dir.path());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["value"].as_f64().unwrap(), 5.0);

    let out = run(&["norm", "x.json", "--phi", "power:2", "--method", "amemiya"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["value"].as_f64().unwrap() >= 5.0 - 1e-9);
}

#[test]
fn svf_prints_steps() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.json"), DIAG_3_4).unwrap();
    let out = run(&["svf", "x.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "level,width\n4.0000000000000000e0,1.0000000000000000e0\n3.0000000000000000e0,1.0000000000000000e0\n"
    );
}

#[test]
fn delta2_of_expm1_fails() {
    let out = run(&["delta2", "--phi", "expm1"], Path::new("."));
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], "FailsEmpirically");
    let out = run(&["delta2", "--phi", "power:2"], Path::new("."));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], "Holds");
}

#[test]
fn conjugate_of_square() {
    let out = run(&["conjugate", "--phi", "power:2", "--grid", "1:4:3"], Path::new("."));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (u, v) = l.split_once(',').unwrap();
            (u.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    for (u, psi) in rows {
        assert!((psi - u * u / 4.0).abs() <= 1e-12 * psi.max(1.0));
    }
}

#[test]
fn kk_run_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), SPIKE_CONFIG).unwrap();
    let out = run(&["kk-run", "--config", "run.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "verdict: PASS\n");
    let csv = std::fs::read_to_string(dir.path().join("records.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,luxemburg,modular,diff_norm,gauge_eps1,gauge_eps2,verdict");
    assert_eq!(lines.count(), 60);

    // without an output path the records go to stdout
    let text = SPIKE_CONFIG.replace("output = \"records.csv\"\n", "");
    std::fs::write(dir.path().join("stdout.toml"), text).unwrap();
    let out = run(&["kk-run", "--config", "stdout.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), csv);
    assert!(String::from_utf8_lossy(&out.stderr).contains("verdict: PASS"));
}

#[test]
fn kk_run_negative_control_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let control = SPIKE_CONFIG.replace(
        "traces = { rule = \"power\", coefficient = 1.0, exponent = -6.0 }",
        "traces = { rule = \"modular_level\", level = 0.5 }",
    );
    std::fs::write(dir.path().join("control.toml"), control).unwrap();
    let out = run(&["kk-run", "--config", "control.toml"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "verdict: NEGATIVE_CONTROL\n");

    let out = run(&["kk-run", "--config", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(dir.path().join("bad.toml"), SPIKE_CONFIG.replace("tol = 1e-2", "tol = -1.0")).unwrap();
    let out = run(&["kk-run", "--config", "bad.toml"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tol"));
}

#[test]
fn counterexample_emits_certificates() {
    let out = run(&["counterexample", "--phi", "expm1", "-K", "5"], Path::new("."));
    assert_eq!(out.status.code(), Some(0));
    let inst: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(inst["k"], 5);
    let certs = inst["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 5);
    for c in certs {
        assert!(c["construction_lhs"].as_f64().unwrap() > c["construction_rhs"].as_f64().unwrap());
    }
    let out = run(&["counterexample", "--phi", "power:2", "-K", "5"], Path::new("."));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&[], Path::new(".")).status.code(), Some(1));
    assert_eq!(run(&["norm"], Path::new(".")).status.code(), Some(1));
    assert_eq!(run(&["bogus"], Path::new(".")).status.code(), Some(1));
    assert_eq!(run(&["delta2", "--phi", "power:0.5"], Path::new(".")).status.code(), Some(1));
    assert_eq!(run(&["conjugate", "--phi", "power:2", "--grid", "1:2"], Path::new(".")).status.code(), Some(1));
    assert_eq!(run(&["--help"], Path::new(".")).status.code(), Some(0));
}

#[test]
fn dispatch_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, DIAG_3_4).unwrap();
    let argv = ["nc-orlicz", "norm", path.to_str().unwrap(), "--phi", "power:2"];
    assert_eq!(nc_orlicz::cli::dispatch(argv), 0);
    assert_eq!(nc_orlicz::cli::dispatch(["nc-orlicz", "kk-run", "--config", "/nonexistent.toml"]), 1);
}
