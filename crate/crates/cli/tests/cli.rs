use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn msx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msx")).args(args).env("MSX_THREADS", "2").output().expect("msx runs")
}

fn run_config(dir: &Path, name: &str, config: &str) -> (Output, std::path::PathBuf) {
    let cfg = dir.join(format!("{name}.json"));
    fs::write(&cfg, config).unwrap();
    let out = dir.join(name);
    let o = msx(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    (o, out)
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn column(csv: &str, col: usize) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn tridiagonal_spectrum_limit() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_config(dir.path(), "tridiag", r#"{"kind":"spectrum","measure":"example4","a":0.5,"n_max":200}"#);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["schema"], 1);
    assert_eq!(s["status"], "ok");
    assert!((s["limit"]["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-6);
    let lambdas = column(&fs::read_to_string(out.join("lambda.csv")).unwrap(), 1);
    assert_eq!(lambdas.len(), 201);
    assert!(lambdas.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn rank_one_inverse_residual() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_config(dir.path(), "inv", r#"{"kind":"invert","measure":"example3","window":4}"#);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    // A = 2I against ½(I + J) leaves the all-ones off-diagonal.
    assert!((s["residuals"]["closed_form"]["left"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(s["residuals"]["limit_route"]["left"].as_f64().unwrap() > 0.9);
    let a = fs::read_to_string(out.join("a_limit.csv")).unwrap();
    assert_eq!(a.lines().count(), 1 + 25);
    let re = column(&a, 2);
    assert!((re[0] - 2.0).abs() < 1e-6 && re[1].abs() < 1e-6);
}

#[test]
fn lebesgue_lambdas_are_one() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_config(dir.path(), "leb", r#"{"kind":"spectrum","measure":"circle_ac","w":"one","n_max":10}"#);
    assert_eq!(o.status.code(), Some(0));
    let lambdas = column(&fs::read_to_string(out.join("lambda.csv")).unwrap(), 1);
    assert_eq!(lambdas.len(), 11);
    assert!(lambdas.iter().all(|l| (l - 1.0).abs() < 1e-14));
    assert!((summary(&out)["essinf"].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn asymptotics_and_toeplitz_limit() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_config(dir.path(), "asy", r#"{"kind":"asymptotics","measure":"example4","a":0.5,"k_max":4,"n_max":120}"#);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert!(s["closed_form"]["alpha_gap"].as_f64().unwrap() < 1e-10);
    assert!(s["closed_form"]["beta_gap"].as_f64().unwrap() < 1e-10);
    for f in ["beta.csv", "alpha.csv", "diagonal_traces.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let (o, out) = run_config(dir.path(), "disk", r#"{"kind":"toeplitz-limit","measure":"disk","k_max":3}"#);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(summary(&out)["max_gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"kind":"invert","measure":"example4","a":0.3,"n_max":40,"window":3}"#;
    let (_, a) = run_config(dir.path(), "one", cfg);
    let (_, b) = run_config(dir.path(), "two", cfg);
    for f in ["a_limit.csv", "a_series.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, cfg) in [
        ("garbage", "{ not json"),
        ("unknown", r#"{"kind":"spectrum","measure":"example9"}"#),
        ("missing_a", r#"{"kind":"spectrum","measure":"example4"}"#),
        ("not_toeplitz", r#"{"kind":"asymptotics","measure":"hofmaier"}"#),
    ] {
        let (o, out) = run_config(dir.path(), name, cfg);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert_eq!(summary(&out)["status"], "config_error", "{name}");
    }
}

#[test]
fn atoms_only_spectrum_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = run_config(
        dir.path(),
        "atoms",
        r#"{"kind":"spectrum","measure":"atoms","atoms":[{"theta":0.0,"mass":1.0},{"theta":2.0,"mass":1.0}],"n_max":6}"#,
    );
    assert_eq!(o.status.code(), Some(3));
    let s = summary(&out);
    assert_eq!(s["status"], "numerical_failure");
    assert_eq!(s["hpd_orders"], 2);
    assert!(out.join("lambda.csv").exists());
}

#[test]
fn moment_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    fs::write(&p, r#"{"type":"circle_ac","w":"example4","a":0.5}"#).unwrap();
    let o = msx(&["moment", p.to_str().unwrap(), "--i", "0", "--j", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let parts: Vec<f64> = text.split_whitespace().map(|x| x.parse().unwrap()).collect();
    // ŵ_1 = a/(1 − a²)
    assert!((parts[0] - 0.5 / 0.75).abs() < 1e-12 && parts[1].abs() < 1e-12);

    fs::write(&p, r#"{"type":"circle_ac","w":"nothing"}"#).unwrap();
    assert_eq!(msx(&["moment", p.to_str().unwrap(), "--i", "0", "--j", "0"]).status.code(), Some(2));
}

#[test]
fn verify_distinguishes_non_convergence() {
    let o = msx(&["verify", "--n-max", "10"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("NOT CONVERGED"), "{text}");
    assert_eq!(o.status.code(), Some(4), "{text}");
}
