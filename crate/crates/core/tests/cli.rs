use std::path::Path;
use std::process::{Command, Output};

use banditlab::cli::output::{CURVES_HEADER, SUMMARY_HEADER, TIMING_HEADER};

const CONFIG: &str = r#"{
  "instance": {"family": "gaussian", "sigma": 1.0, "means": [1.0, 0.5, "0.25"]},
  "horizon": 600, "trials": 3, "seed": 9,
  "policies": [{"name": "rbmle", "label": "rbmle_fixed", "params": {"c_alpha": 4}}, {"name": "ucb"}]
}"#;

fn banditlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_banditlab"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn run_into(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    banditlab(&args)
}

#[test]
fn missing_config_is_a_usage_error_naming_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let out = banditlab(&["run", "--config", missing.to_str().unwrap(), "--out", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.json"), "{stderr}");
}

#[test]
fn run_writes_one_summary_row_per_policy() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    let status = run_into(&config, &out, &[]);
    assert_eq!(
        status.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );

    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("rbmle_fixed,"));
    assert!(lines[2].starts_with("ucb,"));

    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    assert_eq!(curves.lines().next(), Some(CURVES_HEADER));
    // 2 policies x 3 trials x default checkpoints ending at 600
    let rows = curves.lines().skip(1).filter(|l| l.contains(",600,")).count();
    assert_eq!(rows, 6);

    let timing = std::fs::read_to_string(out.join("timing.csv")).unwrap();
    assert_eq!(timing.trim_end(), TIMING_HEADER);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["csv_schema_version"], 1);
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert!(manifest["resolved_config"]["workers"].is_null());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &CONFIG.replace("{\"name\": \"ucb\"}", "{\"name\": \"ucb\"}, {\"name\": \"ts\"}"),
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run_into(&config, &a, &["--workers", "1"]).status.code(), Some(0));
    assert_eq!(run_into(&config, &b, &["--workers", "3"]).status.code(), Some(0));
    for file in ["summary.csv", "curves.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(a.join(file)).unwrap(),
            std::fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    let status = run_into(
        &config,
        &out,
        &["--horizon", "50", "--policies", "ucb,moss", "--seed", "1"],
    );
    assert_eq!(status.status.code(), Some(0));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let ids: Vec<&str> = summary.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["ucb", "moss"]);
    let curves = std::fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(curves
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap() <= 50));
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        CONFIG.replace("\"c_alpha\": 4", "\"c_alpha\": 4, \"delta\": 0.1"),
        CONFIG.replace("0.5,", "1.0,"),
        CONFIG
            .replace("\"ucb\"", "\"gpucb\"")
            .replace("gaussian", "bernoulli")
            .replace("\"sigma\": 1.0, ", ""),
        CONFIG.replace("\"horizon\": 600", "\"horizon\": 0"),
        "{ not json".to_string(),
    ] {
        let config = write_config(dir.path(), &bad);
        let out = run_into(&config, &dir.path().join("o"), &[]);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{bad}\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let config = write_config(dir.path(), CONFIG);
    assert_eq!(
        run_into(&config, &dir.path().join("o"), &["--workers", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(banditlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for suite in ["equivalence", "kstar", "lemmas", "concentration"] {
        let out = banditlab(&["verify", "--suite", suite]);
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert_eq!(out.status.code(), Some(0), "{stdout}");
        assert!(stdout.lines().all(|l| l.contains(" PASS ")), "{stdout}");
    }
}

#[test]
fn bound_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"instance": {"family": "gaussian", "sigma": 1.0, "means": [0.6, 0.5]},
            "horizon": 100, "trials": 1, "seed": 0, "policies": [{"name": "ucb"}],
            "checkpoints": [1, 10, 100]}"#,
    );
    let out = banditlab(&["bound", "--config", &config, "--variant", "gaussian"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], banditlab::cli::BOUND_HEADER);
    assert_eq!(lines.len(), 4);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "gaussian");
    assert!((fields[2].parse::<f64>().unwrap() - 2560.0).abs() < 1e-9);
    // at t = 1 only the constant term survives: 0.1 * 2 pi^2 / 3
    let expected = 0.1 * 2.0 * std::f64::consts::PI.powi(2) / 3.0;
    assert!((fields[4].parse::<f64>().unwrap() - expected).abs() < 1e-12);
    assert_eq!(fields[5], "ok");

    let all = banditlab(&["bound", "--config", &config]);
    let text = String::from_utf8(all.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 3);
    // beta(t) = sqrt(log t) never reaches the adaptive threshold in f64 range
    assert!(text
        .lines()
        .filter(|l| l.starts_with("adaptive_gaussian,"))
        .all(|l| l.split(',').nth(4) == Some("inf")));
}
