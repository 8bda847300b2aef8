//! End-to-end tests of the `spingarn` binary: exit codes, summary
//! format, CSV output, and error reporting.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spingarn"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_prints_summary_and_exits_zero() {
    let out = run(&["solve", fixture("lasso.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(fields[0], "converged");
    let iterations: usize = fields[1].parse().unwrap();
    assert!(iterations > 0);
    let rho_p: f64 = fields[2].parse().unwrap();
    let rho_d: f64 = fields[3].parse().unwrap();
    assert!(rho_p + rho_d <= 1e-8, "{text}");
}

#[test]
fn solve_writes_byte_stable_csv() {
    let dir = std::env::temp_dir().join("spingarn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_a = dir.join("history_a.csv");
    let csv_b = dir.join("history_b.csv");
    for path in [&csv_a, &csv_b] {
        let out = run(&[
            "solve",
            fixture("lasso.json").to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let a = std::fs::read(&csv_a).unwrap();
    let b = std::fs::read(&csv_b).unwrap();
    assert_eq!(a, b, "identical runs must produce identical CSV bytes");

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iter,rho_primal,rho_dual,step_norm,subspace_drift,q1,q2"
    );
    let iters: Vec<usize> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(!iters.is_empty());
    assert!(iters.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn solve_missing_file_names_path() {
    let out = run(&["solve", "/no/such/spec.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("/no/such/spec.json"));
}

#[test]
fn solve_dimension_mismatch_fails_before_iterating() {
    let out = run(&["solve", fixture("bad_dims.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("problem"), "{err}");
}

#[test]
fn solve_multi_min_reports_objective() {
    let out = run(&["solve", fixture("multi_min.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("objective"), "{text}");
    // minimum of ½x² + |x| - 3x is at x = 2 with value -2
    let objective: f64 = text
        .lines()
        .find(|l| l.starts_with("objective"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((objective + 2.0).abs() <= 1e-6);
}

#[test]
fn solve_multi_primal_and_coupled_fixtures() {
    for name in ["multi_primal.json", "coupled.json"] {
        let out = run(&["solve", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        assert!(stdout(&out).starts_with("converged"));
    }
}

#[test]
fn check_suites_exit_zero() {
    let out = run(&[
        "check",
        "projections",
        "--dims",
        "8x5",
        "--trials",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("max deviation"), "{text}");
    let dev: f64 = text.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!(dev <= 1e-10, "{text}");

    let out = run(&["check", "partial_inverse", "--dims", "4", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = run(&["check", "firm_nonexpansive", "--trials", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn check_zero_trials_is_an_error() {
    let out = run(&["check", "projections", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_modes() {
    let lasso = fixture("lasso.json");
    let out = run(&["compare", lasso.to_str().unwrap(), "--iters", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("max iterate discrepancy"));

    // zero iterations: identical initialization, discrepancy 0
    let out = run(&["compare", lasso.to_str().unwrap(), "--iters", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.00000000000e0"), "{}", stdout(&out));

    // non-composite spec is rejected
    let out = run(&["compare", fixture("coupled.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("composite"));
}

#[test]
fn solve_exit_code_on_budget_exhaustion() {
    let dir = std::env::temp_dir().join("spingarn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("tight_budget.json");
    std::fs::write(
        &spec,
        r#"{
            "problem": {
                "kind": "composite",
                "a": {"kind": "quadratic", "matrix": [[1.0]], "linear": [3.0]},
                "b": {"kind": "l1_norm", "dim": 1},
                "l": {"kind": "identity", "dim": 1}
            },
            "config": {"max_iter": 2, "tol": 1e-14}
        }"#,
    )
    .unwrap();
    let out = run(&["solve", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("max_iter"));
}

#[test]
fn help_names_all_subcommands() {
    let out = run(&["--help"]);
    let text = stdout(&out);
    for cmd in ["solve", "check", "compare"] {
        assert!(text.contains(cmd), "{text}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_spingarn")).exists());
}
