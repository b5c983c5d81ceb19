use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susy-fp"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Rows of a CSV file as numbers, header dropped.
fn numeric_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn build_poly_b0_matches_reference_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--seed", "poly:B=0", "--c", "0", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let header = fs::read_to_string(dir.path().join("o/model.csv")).unwrap();
    assert!(header.starts_with("x,t,V1,V2,f,fx,fxx,g2,U1,U2,rho1,rho2\n"));
    let rows = numeric_rows(&dir.path().join("o/model.csv"));
    let row = rows
        .iter()
        .find(|r| (r[0] - 1.0).abs() < 1e-9 && r[1] == 1.0)
        .expect("grid has a node at (1, 1)");
    assert!((row[2] + 4.0 / 9.0).abs() < 1e-15, "V1(1,1) = {}", row[2]);
}

#[test]
fn build_const_seed_has_flat_potentials() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--seed", "const", "--c", "4", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0));
    for r in numeric_rows(&dir.path().join("o/model.csv")) {
        assert_eq!((r[2], r[3]), (2.0, 2.0));
    }
}

#[test]
fn build_rejects_negative_offset() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--seed", "poly:B=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("positivity"), "{}", stderr(&o));
}

#[test]
fn build_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["build", "--grid", "41,21,-2,2,0.1,1", "--out", "a"]);
    run(dir.path(), &["build", "--grid", "41,21,-2,2,0.1,1", "--out", "b"]);
    let a = fs::read(dir.path().join("a/model.csv")).unwrap();
    let b = fs::read(dir.path().join("b/model.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn verify_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let csv = fs::read_to_string(dir.path().join("out/verify.csv")).unwrap();
    assert!(csv.lines().count() > 20);
}

#[test]
fn verify_corrupted_g2_fails_intertwining() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--corrupt", "g2", "--grid", "81,41,-4,4,0.1,1"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("intertwining")).unwrap();
    assert!(row.ends_with("FAIL"), "{row}");
}

#[test]
fn verify_const_seed_residuals_are_tiny() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--seed", "const", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/verify.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let max: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        // Finite-difference rows carry rounding amplified by 1/(ht hx²).
        let finite_difference = line.split(',').nth(11).is_some_and(|o| !o.is_empty());
        let bound = if finite_difference { 1e-10 } else { 1e-12 };
        assert!(max < bound, "{line}");
        assert!(line.ends_with("PASS"), "{line}");
    }
}

#[test]
fn evolve_worked_example_on_200_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["evolve", "--grid", "200,200,-8,8,0.05,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let errors = numeric_rows(&dir.path().join("out/errors.csv"));
    assert_eq!(errors.len(), 200);
    let last = errors.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert!(last[1] < 5e-3, "final Linf {}", last[1]);
    assert_eq!(numeric_rows(&dir.path().join("out/evolution.csv")).len(), 200 * 200);
}

#[test]
fn evolve_heat_control_is_second_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["evolve", "--system", "heat", "--grid", "161,161,-8,8,0.05,1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let order: f64 = out
        .split("order ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((1.8..=2.2).contains(&order), "{out}");
}

#[test]
fn evolve_rejects_half_line_drift() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["evolve", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("b = 0"), "{}", stderr(&o));
}

#[test]
fn solver_abort_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["evolve", "--tol", "growth_limit=1e-3", "--grid", "41,11,-8,8,0.05,1"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("unstable"));
}

#[test]
fn example_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["example"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("U2(x)      = -2.0000·x"));
    for f in ["model.csv", "verify.csv", "evolution.csv", "analytic.csv", "errors.csv"] {
        assert!(dir.path().join("out").join(f).is_file(), "{f}");
    }
}

#[test]
fn example_reference_potential_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["example", "--B", "0", "--c", "0"]);
    assert!(stdout(&o).contains("V1(1, 1)   = -0.4444"), "{}", stdout(&o));
}

#[test]
fn example_with_b_is_analytic_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["example", "--b", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("analytic-only"));
    assert!(!dir.path().join("out/evolution.csv").exists());
}

#[test]
fn export_plot_needs_prior_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["export-plot"]);
    assert_ne!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("model.csv") && err.contains("evolution.csv"), "{err}");
}

#[test]
fn export_plot_after_build_and_evolve() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["build", "--out", "b", "--grid", "41,21,-4,4,0.1,1"]);
    assert_eq!(run(dir.path(), &["export-plot", "--out", "b"]).status.code(), Some(0));
    let script = fs::read_to_string(dir.path().join("b/plot.gp")).unwrap();
    assert_eq!(script.matches("title 'V1, t = ").count(), 3);

    run(dir.path(), &["evolve", "--out", "e", "--grid", "81,41,-8,8,0.05,1"]);
    run(dir.path(), &["export-plot", "--out", "e"]);
    let script = fs::read_to_string(dir.path().join("e/plot.gp")).unwrap();
    assert!(script.contains("'evolution.csv'") && script.contains("'analytic.csv'"));
}

#[test]
fn config_file_precedence_and_typos() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "seed = const\nc = 4\ngrid = 11,11,-1,1,0.1,1\n").unwrap();
    let o = run(dir.path(), &["build", "--config", "run.cfg", "--c", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = numeric_rows(&dir.path().join("out/model.csv"));
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().all(|r| r[2] == 1.0));

    fs::write(dir.path().join("bad.cfg"), "c = 1\nseeed = const\n").unwrap();
    let o = run(dir.path(), &["build", "--config", "bad.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.cfg:2"), "{}", stderr(&o));
}

#[test]
fn bad_flag_values_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["build", "--grid", "10,10,1,0,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--grid"));
    let o = run(dir.path(), &["build", "--tol", "idenity=1"]);
    assert!(stderr(&o).contains("unknown threshold"));
}
