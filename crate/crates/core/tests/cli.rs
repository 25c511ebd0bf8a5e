use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use persuasion_core::cli::SolveReport;
use persuasion_core::dist::{ContinuousPrior, MixedDistribution};
use persuasion_core::dtu::{solve_overall, y_upper};

const TN: &str = r#"{"kind": "truncated_normal", "mu": 0.3333333333333333, "sigma": 0.14}"#;

fn scenario(json: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir().join(format!(
        "persuade-{}-{}.json",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::write(&path, json).unwrap();
    path
}

fn persuade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persuade")).args(args).env("RUST_LOG", "off").output().unwrap()
}

fn run(cmd: &str, json: &str, extra: &[&str]) -> Output {
    let path = scenario(json);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = persuade(&args);
    std::fs::remove_file(path).ok();
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn solve(json: &str, extra: &[&str]) -> SolveReport {
    let o = run("solve", json, extra);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').filter_map(|c| c.parse::<f64>().ok()).collect())
        .collect()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("{key} missing in {text}"))
}

#[test]
fn solve_binary_uniform() {
    let r = solve(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3, "tie_rule": "against"}"#, &[]);
    assert!((r.value - 0.625).abs() < 1e-12);
    assert!(r.distribution.cdf_distance(&MixedDistribution::uniform(0.0, 0.8).unwrap()) < 1e-12);
    assert!(r.has_flag("unique"));
}

#[test]
fn report_round_trips() {
    let o = run("solve", &format!(r#"{{"prior": {TN}, "r_star": 0.5, "oracle": {{"n": 51}}}}"#), &[]);
    let text = stdout(&o);
    let r: SolveReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.to_json() + "\n", text);
    assert!(r.oracle.is_some() && r.diagnostics.is_some());
}

#[test]
fn solve_small_r_star_truncated_normal() {
    let r = solve(&format!(r#"{{"prior": {TN}, "r_star": 0.1}}"#), &[]);
    assert!(r.has_flag("small_r_star_optimal"), "{:?}", r.flags);
    let d = r.diagnostics.unwrap();
    assert!(d.q1_zero.unwrap() >= 0.1);
    assert_eq!(d.y, 0.0);
    assert!(d.v_residual.unwrap().abs() <= 1e-8);
}

#[test]
fn solve_full_disclosure() {
    let r = solve(r#"{"prior": {"kind": "polynomial_cdf", "coeffs": [0, 0, 1]}, "r_star": 0.5}"#, &[]);
    assert!(r.has_flag("full_disclosure"));
    assert_eq!(r.value, 0.5);
}

#[test]
fn tie_override() {
    let r = solve(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#, &["--tie", "favor"]);
    assert_eq!(r.tie_rule.name(), "favor");
    let r = solve(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#, &["--oracle-n", "41"]);
    assert_eq!(r.oracle.unwrap().n, 41);
}

#[test]
fn verify_binary_passes() {
    for (json, n) in [
        (r#"{"prior": {"kind": "binary", "pi": 0.3}, "r_star": 0.6, "oracle": {"n": 201}}"#, 201.0),
        (r#"{"prior": {"kind": "binary", "pi": 0.5}, "r_star": 0.5, "tie_rule": "even", "oracle": {"n": 201}}"#, 201.0),
    ] {
        let o = run("verify", json, &[]);
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{text}");
        assert_eq!(field(&text, "status"), "pass");
        assert!(field(&text, "gap").parse::<f64>().unwrap() <= 3.0 / n);
    }
}

#[test]
fn verify_heuristic_reports_gap_only() {
    let json = r#"{"prior": {"kind": "piecewise_linear_density", "knots": [[0, 1.0], [0.1, 3.0], [1, 0.2]]},
                   "r_star": 0.25, "oracle": {"n": 101}}"#;
    let o = run("verify", json, &[]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&text, "status"), "heuristic");
    assert!(field(&text, "gap").parse::<f64>().is_ok());
    assert!(!text.contains("threshold"));
}

#[test]
fn parse_errors_exit_two() {
    for json in [
        "{not json",
        r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3, "colour": "red"}"#,
        r#"{"prior": {"kind": "binary", "pi": 0.4, "sigma": 1}, "r_star": 0.3}"#,
        r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3, "tie_rule": "sometimes"}"#,
    ] {
        assert_eq!(run("solve", json, &[]).status.code(), Some(2), "{json}");
    }
    assert_eq!(persuade(&["solve", "/nonexistent/scenario.json"]).status.code(), Some(2));
    let b = r#"{"prior": {"kind": "binary", "pi": 0.3}, "r_star": 0.5}"#;
    for range in [["0.5", "0.2", "3"], ["0.0", "0.5", "3"], ["0.1", "0.5", "0"], ["0.1", "1.5", "4"]] {
        let o = run("sweep", b, &["--axis", "r-star", "--min", range[0], "--max", range[1], "--steps", range[2]]);
        assert_eq!(o.status.code(), Some(2), "{range:?}");
    }
    let o = run("sweep", &format!(r#"{{"prior": {TN}, "r_star": 0.5}}"#), &["--axis", "pi", "--min", "0.2", "--max", "0.4", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_three_with_warnings() {
    assert_eq!(run("solve", r#"{"prior": {"kind": "binary", "pi": 1.2}, "r_star": 0.3}"#, &[]).status.code(), Some(3));
    assert_eq!(run("solve", r#"{"prior": {"kind": "binary", "pi": 0.2}, "r_star": 1.0}"#, &[]).status.code(), Some(3));
    let o = run("solve", &format!(r#"{{"prior": {TN}, "r_star": 1.5}}"#), &[]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("warning: f'(0)"), "{err}");
    let o = run("solve", r#"{"prior": {"kind": "truncated_normal", "mu": 0.3, "sigma": -1}, "r_star": 0.3}"#, &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_r_star_is_nonincreasing() {
    let o = run(
        "sweep",
        r#"{"prior": {"kind": "binary", "pi": 0.3}, "r_star": 0.5}"#,
        &["--axis", "r-star", "--min", "0.05", "--max", "0.95", "--steps", "19"],
    );
    let text = stdout(&o);
    assert!(text.starts_with("r_star,value,flags\n"));
    let rows = csv(&text);
    assert_eq!(rows.len(), 19);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0] && w[1][1] <= w[0][1] + 1e-15));
}

#[test]
fn sweep_pi_above_half_is_flat() {
    let o = run(
        "sweep",
        r#"{"prior": {"kind": "binary", "pi": 0.3}, "r_star": 0.3}"#,
        &["--axis", "pi", "--min", "0.55", "--max", "0.9", "--steps", "8", "--oracle", "--oracle-n", "101"],
    );
    let text = stdout(&o);
    assert!(text.starts_with("pi,value,oracle_value,flags\n"));
    for row in csv(&text) {
        assert!((row[1] - 0.7).abs() <= 1e-12, "{row:?}");
        assert!((row[2] - 0.7).abs() <= 3.0 / 101.0, "{row:?}");
    }
}

#[test]
fn sweep_y_matches_profile() {
    let prior = ContinuousPrior::truncated_normal(1.0 / 3.0, 0.14).unwrap();
    let overall = solve_overall(&prior, 0.5, 1e-12).unwrap();
    let yhi = format!("{}", y_upper(&prior));
    let o = run("sweep", &format!(r#"{{"prior": {TN}, "r_star": 0.5}}"#), &["--axis", "y", "--min", "0", "--max", &yhi, "--steps", "64"]);
    let rows = csv(&stdout(&o));
    assert_eq!(rows.len(), 64);
    assert_eq!(rows.len(), overall.y_profile.len());
    for (row, (y, v)) in rows.iter().zip(&overall.y_profile) {
        assert_eq!(row[0], *y);
        assert_eq!(row[1], *v);
    }
}

#[test]
fn plotdata_binary_shape() {
    let o = run("plotdata", r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#, &[]);
    let text = stdout(&o);
    assert!(text.starts_with("q,F,G,G_env\n"));
    let rows = csv(&text);
    assert_eq!(rows.len(), 512);
    for r in &rows {
        assert!((r[2] - (r[0] / 0.8).min(1.0)).abs() <= 1e-12);
        let f = if r[0] < 1.0 { 0.6 } else { 1.0 };
        assert_eq!(r[1], f);
    }
    let env: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    assert!(env.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] <= 1e-9));
}

#[test]
fn plotdata_dtu_shape() {
    let path_json = format!(r#"{{"prior": {TN}, "r_star": 0.7}}"#);
    let r = solve(&path_json, &[]);
    let d = r.diagnostics.unwrap();
    let o = run("plotdata", &path_json, &["--points", "1001"]);
    let rows = csv(&stdout(&o));
    assert_eq!(rows.len(), 1001);
    for w in rows.windows(2) {
        let (q, g) = (w[1][0], w[1][2]);
        if q < d.ell {
            assert_eq!(g, 0.0);
        } else if q < d.q_top {
            assert!((g - (d.beta * q + d.y)).abs() <= 1e-12);
        } else {
            assert_eq!(g, 1.0);
        }
    }
    let env: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    assert!(env.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] <= 1e-9));
}

#[test]
fn outputs_are_deterministic() {
    let json = format!(r#"{{"prior": {TN}, "r_star": 0.6}}"#);
    assert_eq!(run("solve", &json, &[]).stdout, run("solve", &json, &[]).stdout);
    let args = ["--axis", "r-star", "--min", "0.3", "--max", "0.8", "--steps", "6"];
    assert_eq!(run("sweep", &json, &args).stdout, run("sweep", &json, &args).stdout);
}

#[test]
fn output_file_flag() {
    let out = std::env::temp_dir().join(format!("persuade-out-{}.json", std::process::id()));
    let o = run("solve", r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#, &["-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: SolveReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    std::fs::remove_file(out).ok();
    assert!((r.value - 0.625).abs() < 1e-12);
}
