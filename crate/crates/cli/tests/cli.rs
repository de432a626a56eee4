use std::path::Path;
use std::process::{Command, Output};

fn bogoent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bogoent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

const IDENTITY: &str = "bogoent-coefficients 1\nmodes 1 2\nsize 2\norder exact\nh 0\nresidual_bound 1e-10\n\
                        alpha\n1 0 0 0\n0 0 1 0\nbeta\n0 0 0 0\n0 0 0 0\n";

#[test]
fn cavity_sweep_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"h": 0.001, "cutoff": 30, "pair": [1, 2], "squeezings": [0, 1],
            "u_grid": {"start": 0, "stop": 1, "step": 0.01}}"#,
    );
    let out = dir.path().join("c.csv");
    let o = bogoent(&["cavity", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# bogoent "));
    assert!(text.contains("# config_sha256 "));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 101);
    // u, leading x2, full x2, F, det x2
    assert!(rows[0][1..5].iter().all(|v| v.abs() <= 1e-10));
    for r in &rows {
        assert!(r[1..5].iter().all(|&v| v >= 0.0));
        assert!(r[6..].iter().all(|&d| d >= 1.0 - 1e-10));
        assert!(r[2] >= r[1], "leading order at u = {}", r[0]);
        // the full curves may only cross where the leading orders coincide
        assert!(r[4] >= r[3] - 1e-3, "full pipeline at u = {}", r[0]);
    }
}

#[test]
fn cutoff_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"h": 0.001, "cutoff": 30, "pair": [1, 2], "squeezings": [0], "u_grid": [0.25]}"#,
    );
    let o = bogoent(&["--threads", "1", "cavity", "--config", &cfg, "--cutoff", "12"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("cutoff 12"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let decreasing = write(
        dir.path(),
        "d.json",
        r#"{"h": 0.001, "cutoff": 30, "pair": [1, 2], "squeezings": [0], "u_grid": [0.5, 0.2]}"#,
    );
    assert_eq!(bogoent(&["cavity", "--config", &decreasing]).status.code(), Some(2));
    let unknown = write(
        dir.path(),
        "u.json",
        r#"{"epsilon": 1, "rho": 1, "mass": 1, "k": 1, "extra": true}"#,
    );
    assert_eq!(bogoent(&["frw", "--config", &unknown]).status.code(), Some(2));
    let bad_h = write(
        dir.path(),
        "h.json",
        r#"{"h": 3, "cutoff": 30, "pair": [1, 2], "squeezings": [0], "u_grid": [0.5]}"#,
    );
    assert_eq!(bogoent(&["cavity", "--config", &bad_h]).status.code(), Some(2));
    assert_eq!(bogoent(&["cavity", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(bogoent(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unconverged_cutoff_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "n.json",
        r#"{"h": 0.5, "cutoff": 3, "pair": [1, 2], "squeezings": [1], "u_grid": [0.3]}"#,
    );
    let o = bogoent(&["cavity", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not converged"));
}

#[test]
fn check_reports_identity_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "id.txt", IDENTITY);
    let o = bogoent(&["check", &file]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("unitarity 0.0000000000000000e0"));
    assert!(text.contains("symmetry 0.0000000000000000e0"));

    let broken = write(dir.path(), "bad.txt", &IDENTITY.replace("alpha\n1 0", "alpha\n2 0"));
    assert_eq!(bogoent(&["check", &broken]).status.code(), Some(3));
    let malformed = write(dir.path(), "m.txt", "bogoent-coefficients 1\nmodes 1\n");
    assert_eq!(bogoent(&["check", &malformed]).status.code(), Some(2));
}

#[test]
fn apply_identity_gives_no_entanglement() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "id.txt", IDENTITY);
    for s in ["0", "0.7"] {
        let cfg = write(
            dir.path(),
            "a.json",
            &format!(r#"{{"coefficients": "id.txt", "squeezings": [{s}, 1.5], "pair": [2, 1]}}"#),
        );
        let o = bogoent(&["apply", "--config", &cfg]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let rows = data_rows(&String::from_utf8_lossy(&o.stdout));
        assert_eq!(rows[0][3], 0.0);
    }
    let wrong = write(
        dir.path(),
        "w.json",
        r#"{"coefficients": "id.txt", "squeezings": [0], "pair": [1, 2]}"#,
    );
    assert_eq!(bogoent(&["apply", "--config", &wrong]).status.code(), Some(2));
}

#[test]
fn frw_without_expansion_is_separable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "f.json",
        r#"{"epsilon": 0, "rho": 1, "mass": 1, "k": {"start": 0.5, "stop": 5, "step": 0.5}}"#,
    );
    let o = bogoent(&["frw", "--config", &cfg]);
    assert!(o.status.success());
    let rows = data_rows(&String::from_utf8_lossy(&o.stdout));
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[3] == 0.0 && r[1] == 0.0));
}
