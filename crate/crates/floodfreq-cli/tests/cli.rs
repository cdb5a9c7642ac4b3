//! Binary-level tests: flag handling, output schema and file reproducibility.

use std::fs;
use std::process::{Command, Output};

fn floodfreq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floodfreq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_emits_one_row_per_return_period_and_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = floodfreq(&[
        "run",
        "--scenario", "2",
        "--n-extreme", "0",
        "--years", "30",
        "--runs", "100",
        "--seed", "42",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&path).unwrap();
    let data_rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("scenario_id") && !l.is_empty())
        .count();
    // 9 return periods x 2 default models for scenario 2
    assert_eq!(data_rows, 18);
    assert!(text.contains("# config: "));
    assert!(text.lines().any(|l| l.starts_with(
        "scenario_id,n_extreme,years,return_period,model,mean_bias,rmse,runs_used,runs_failed,master_seed"
    )));
}

#[test]
fn identical_flags_give_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (path, serial) in [(&a, false), (&b, true)] {
        let mut args = vec![
            "run",
            "--scenario", "1",
            "--n-extreme", "2",
            "--years", "30",
            "--runs", "200",
            "--seed", "7",
            "--out", path.to_str().unwrap(),
        ];
        if serial {
            args.push("--serial");
        }
        let out = floodfreq(&args);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn invalid_scenario_is_a_config_error() {
    let out = floodfreq(&[
        "run",
        "--scenario", "6",
        "--n-extreme", "0",
        "--years", "30",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("scenario"), "stderr: {}", stderr(&out));
}

#[test]
fn pot_with_unequal_thresholds_is_refused_up_front() {
    let out = floodfreq(&[
        "run",
        "--scenario", "4",
        "--n-extreme", "1",
        "--years", "30",
        "--models", "POT",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("threshold"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn json_format_mirrors_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = floodfreq(&[
        "run",
        "--scenario", "3",
        "--n-extreme", "2",
        "--years", "30",
        "--runs", "20",
        "--seed", "1",
        "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["config"]["master_seed"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 18);
    assert!(doc["rows"][0]["mean_bias"].is_number());
}

#[test]
fn quantile_evaluates_known_values_and_rejects_t_of_one() {
    let out = floodfreq(&[
        "quantile",
        "--model", "tmps",
        "--component", "0.2,5,10,0",
        "--return-periods", "100",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("47.797"), "stdout: {}", stdout(&out));

    let out = floodfreq(&[
        "quantile",
        "--model", "ams",
        "--shape", "0",
        "--scale", "1",
        "--location", "0",
        "--return-periods", "100",
    ]);
    assert!(stdout(&out).contains("4.600"), "stdout: {}", stdout(&out));

    let out = floodfreq(&[
        "quantile",
        "--model", "pot",
        "--shape", "0.2",
        "--scale", "5",
        "--threshold", "10",
        "--rate", "1",
        "--return-periods", "1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn quantile_reads_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(
        &path,
        r#"{"model":"POT","shape":0.2,"scale":5.0,"threshold":10.0,"rate":1.0}"#,
    )
    .unwrap();
    let out = floodfreq(&[
        "quantile",
        "--params-file", path.to_str().unwrap(),
        "--return-periods", "100",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    // rate 1 reduces to the mapped GEV's 100-year level
    assert!(stdout(&out).contains("47.73"), "stdout: {}", stdout(&out));
}

#[test]
fn seed_env_variable_is_honored_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        dir.path().join("a.csv"),
        dir.path().join("b.csv"),
        dir.path().join("c.csv"),
    );
    let base = |path: &std::path::Path| {
        vec![
            "run".to_string(),
            "--scenario".into(), "2".into(),
            "--n-extreme".into(), "0".into(),
            "--years".into(), "30".into(),
            "--runs".into(), "20".into(),
            "--out".into(), path.to_str().unwrap().to_string(),
        ]
    };
    // env seed
    let out = Command::new(env!("CARGO_BIN_EXE_floodfreq"))
        .args(base(&a))
        .env("FLOODFREQ_SEED", "123")
        .output()
        .unwrap();
    assert!(out.status.success());
    // explicit flag with the same value
    let mut args = base(&b);
    args.extend(["--seed".into(), "123".into()]);
    assert!(floodfreq(&args.iter().map(String::as_str).collect::<Vec<_>>())
        .status
        .success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    // flag overrides env
    let mut args = base(&c);
    args.extend(["--seed".into(), "123".into()]);
    let out = Command::new(env!("CARGO_BIN_EXE_floodfreq"))
        .args(&args)
        .env("FLOODFREQ_SEED", "999")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read(&b).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn config_file_reruns_the_embedded_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let (first, rerun) = (dir.path().join("first.csv"), dir.path().join("rerun.csv"));
    let out = floodfreq(&[
        "run",
        "--scenario", "1",
        "--n-extreme", "0",
        "--years", "30",
        "--runs", "50",
        "--seed", "5",
        "--out", first.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    // extract the embedded config and feed it back
    let text = fs::read_to_string(&first).unwrap();
    let config_json = text
        .lines()
        .find(|l| l.starts_with("# config: "))
        .unwrap()
        .trim_start_matches("# config: ");
    let config_path = dir.path().join("cfg.json");
    fs::write(&config_path, config_json).unwrap();

    let out = floodfreq(&[
        "run",
        "--config-file", config_path.to_str().unwrap(),
        "--out", rerun.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&rerun).unwrap());

    // scenario flags conflict with the config file
    let out = floodfreq(&[
        "run",
        "--config-file", config_path.to_str().unwrap(),
        "--scenario", "1",
        "--n-extreme", "0",
        "--years", "30",
    ]);
    assert!(!out.status.success());
}

#[test]
fn table1_contains_reference_values_and_deviations() {
    let out = floodfreq(&["table1", "--seed", "42"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("0.403"), "missing AMS reference value");
    assert!(text.contains("0.055"), "missing TMPS reference value");
    assert!(text.contains("dev30") && text.contains("dev100"));
    // every reference cell appears twice (bias and spread)
    let lines = text
        .lines()
        .filter(|l| l.contains("bias") || l.contains("spread"))
        .count();
    assert_eq!(lines, 28);
}
