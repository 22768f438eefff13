use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coagfrag::harness::ExampleInfo;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coagfrag"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

/// `(x, mass)` rows of a `t,x,mass` file.
fn read_state(path: &Path) -> Vec<(f64, f64)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["t", "x", "mass"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[1].parse().unwrap(), rec[2].parse().unwrap())
        })
        .collect()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn unknown_example_lists_names() {
    let out = run(&["run", "--example", "example9"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["example1", "example2", "example3", "example4"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn invalid_variant_is_a_usage_error() {
    let out = run(&["converge", "--example", "1", "--variant", "implicit"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("semi-implicit"));
}

#[test]
fn source_is_required_and_exclusive() {
    assert_eq!(run(&["run"]).status.code(), Some(2));
    let p = problem("example1.json");
    let out = run(&["run", "--example", "1", "--problem", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["run", "--example", "1", "--nt", "10", "--dt", "0.05"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_time_run_returns_projected_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--example", "1", "--t-final", "0", "--nt", "0", "--nx", "40",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let state = read_state(&dir.path().join("final_state.csv"));
    assert_eq!(state.len(), 41);
    let dx = 0.5;
    for (j, &(x, m)) in state.iter().enumerate().skip(1) {
        let (lo, hi) = ((j as f64 - 0.5) * dx, (j as f64 + 0.5) * dx);
        let expect = (-lo).exp() - (-hi).exp();
        assert!((x - j as f64 * dx).abs() < 1e-15);
        assert!((m - expect).abs() < 1e-15, "cell {j}: {m} vs {expect}");
    }
    // no growth: the boundary cell is closed to zero
    assert_eq!(state[0], (0.125, 0.0));
}

#[test]
fn manifest_records_cfl_bound_and_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--example", "example1", "--nx", "100", "--nt", "250",
        "--variant", "semi-implicit", "--limiter", "paper",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(dir.path());
    let dt = m["config"]["dt"].as_f64().unwrap();
    assert!((dt - 0.002).abs() < 1e-15);
    assert!(m["cfl_bound"].as_f64().unwrap() >= dt);
    assert_eq!(m["config"]["variant"], "semi_implicit");
    assert_eq!(m["config"]["limiter"], "paper_literal");
    assert_eq!(m["steps"], 250);
    assert!(m["min_mass"].is_number());
    assert!(m["first_moment_drift"].is_number());
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn all_steps_storage_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--example", "2", "--nx", "20", "--nt", "40", "--storage", "all",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 41 * 21);
}

#[test]
fn cfl_violation_fails_under_enforce() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--example", "2", "--nx", "100", "--nt", "2",
        "--out", dir.path().to_str().unwrap(),
    ];
    let out = run(&args);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("CFL"));
    let mut warn = args.to_vec();
    warn.extend(["--cfl-policy", "warn"]);
    assert!(run(&warn).status.success());
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&[
            "run", "--example", "3", "--nx", "50", "--nt", "50", "--variant", "semi-implicit",
            "--storage", "all", "--out", dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["final_state.csv", "trajectory.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn single_level_gives_one_row_without_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "converge", "--example", "1", "--levels", "1", "--nx", "50", "--nt", "100",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "Nx,Nt,error,order");
    assert!(lines[1].starts_with("50,100,") && lines[1].ends_with(','), "{}", lines[1]);
}

#[test]
fn converge_json_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "converge", "--example", "2", "--levels", "3", "--nx", "25", "--nt", "100",
        "--json", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["Nx"], 100);
    assert!(rows[0]["order"].is_null());
    let order = rows[2]["order"].as_f64().unwrap();
    assert!(order > 1.5, "{order}");
    assert!(dir.path().join("convergence.json").exists());
    assert!(dir.path().join("convergence.csv").exists());
}

#[test]
fn examples_listing() {
    let out = run(&["examples"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for tag in ["Table 1", "Table 2", "Table 3", "Figure"] {
        assert!(text.contains(tag), "{text}");
    }

    let out = run(&["examples", "--json"]);
    let infos: Vec<ExampleInfo> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(infos.len(), 4);
    let again = serde_json::to_string_pretty(&infos).unwrap();
    assert_eq!(again.trim_end(), String::from_utf8(out.stdout).unwrap().trim_end());
}

fn compare_with_builtin(file: &str, builtin: &str, nx: &str, nt: &str, tol: f64) {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let p = problem(file);
    let common = ["--nx", nx, "--nt", nt, "--cfl-policy", "warn"];
    let mut from_file = vec!["run", "--problem", p.to_str().unwrap(), "--out", a.path().to_str().unwrap()];
    from_file.extend(common);
    let mut from_builtin = vec!["run", "--example", builtin, "--out", b.path().to_str().unwrap()];
    from_builtin.extend(common);
    for args in [&from_file, &from_builtin] {
        let out = run(args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let x = read_state(&a.path().join("final_state.csv"));
    let y = read_state(&b.path().join("final_state.csv"));
    assert_eq!(x.len(), y.len());
    let scale = y.iter().fold(0.0f64, |s, p| s.max(p.1.abs()));
    for ((xa, ma), (xb, mb)) in x.iter().zip(&y) {
        assert_eq!(xa, xb);
        assert!((ma - mb).abs() <= tol * scale, "{file} at {xa}: {ma} vs {mb}");
    }
}

#[test]
fn problem_files_reproduce_builtins() {
    // the files project by quadrature, the built-ins by closed-form cell integrals
    compare_with_builtin("example1.json", "example1", "40", "50", 1e-7);
    compare_with_builtin("example2.json", "example2", "40", "50", 1e-7);
    compare_with_builtin("example3.json", "example3", "40", "50", 1e-7);
}

#[test]
fn example4_file_matches_builtin_initial_data() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let p = problem("example4.json");
    let common = ["--nx", "30", "--t-final", "0", "--nt", "0"];
    let mut from_file = vec!["run", "--problem", p.to_str().unwrap(), "--out", a.path().to_str().unwrap()];
    from_file.extend(common);
    let mut from_builtin = vec!["run", "--example", "4", "--out", b.path().to_str().unwrap()];
    from_builtin.extend(common);
    for args in [&from_file, &from_builtin] {
        assert!(run(args).status.success());
    }
    let x = read_state(&a.path().join("final_state.csv"));
    let y = read_state(&b.path().join("final_state.csv"));
    // 5 and 15 are cell edges on this grid; Simpson puts weight h/3 = dx/48 of
    // the indicator on the node just outside the boxcar
    let dx: f64 = 20.0 / 30.0;
    for (j, ((_, ma), (_, mb))) in x.iter().zip(&y).enumerate() {
        let tol = if j == 7 || j == 23 { dx / 48.0 + 1e-12 } else { 1e-12 };
        assert!((ma - mb).abs() <= tol, "cell {j}: {ma} vs {mb}");
    }

    let out = run(&["run", "--problem", p.to_str().unwrap(), "--nx", "40", "--nt", "80", "--out", a.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let end = read_state(&a.path().join("final_state.csv"));
    // the atoms stay isolated: cells next to 1, 2, 3, 4 carry no mass
    for k in 1..=4 {
        let j = 2 * k;
        assert!(end[j].1 > 0.0);
        assert_eq!(end[j - 1].1, 0.0);
        assert_eq!(end[j + 1].1, 0.0);
    }
}

#[test]
fn problem_file_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "x_max": 10, "t_final": 1, "growth": "sin(x)", "initial": {}}"#)
        .unwrap();
    let out = run(&["run", "--problem", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sin"));
}
