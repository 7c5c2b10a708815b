use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edge-auction"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, unit_cost: f64, capacity: &str) -> String {
    let path = dir.join("config.json");
    fs::write(
        &path,
        format!(
            r#"{{"fixed_bonus": 2.5, "fee_rate": 0.007, "mean_block_interval": 600,
               "propagation_coeff": 1, "mu": 0.5, "nu": 0.005, "unit_cost": {unit_cost},
               "capacity": {capacity}, "hash_exponent": 1.2, "num_users": 40}}"#
        ),
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn auction_run_writes_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 0.02, "1");
    let bids = dir.path().join("bids.json");
    fs::write(
        &bids,
        r#"[{"id": 10, "tx_size": 0, "demand": 1, "bid": 10.0},
            {"id": 20, "tx_size": 0, "demand": 1, "bid": 8.0}]"#,
    )
    .unwrap();
    let out = dir.path().join("outcome.json");
    let run = cli(&[
        "auction",
        "run",
        "--bids",
        bids.to_str().unwrap(),
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );

    let outcome: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(outcome["winners"], serde_json::json!([10]));
    assert_eq!(outcome["allocation"], serde_json::json!([1, 0]));
    let p = outcome["payments"][0].as_f64().unwrap();
    assert!((p - 0.006_644_407_484_603_699).abs() < 1e-12);
}

#[test]
fn auction_run_rejects_variable_demand() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 0.02, "null");
    let bids = dir.path().join("bids.json");
    fs::write(
        &bids,
        r#"[{"id": 1, "tx_size": 5, "demand": 2, "bid": 3.0}]"#,
    )
    .unwrap();
    let out = dir.path().join("o.json");
    let run = cli(&[
        "auction",
        "run",
        "--bids",
        bids.to_str().unwrap(),
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).starts_with("error: "));
}

#[test]
fn sweep_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 0.002, "null");
    let csv = dir.path().join("lambda.csv");
    let run = cli(&[
        "experiment",
        "sweep",
        "--param",
        "lambda",
        "--config",
        &config,
        "--grid",
        "300,600",
        "--instances",
        "3",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 7);
    assert!(dir.path().join("lambda_means.csv").exists());

    let json = dir.path().join("users.json");
    let run = cli(&[
        "experiment",
        "sweep",
        "--param",
        "users",
        "--config",
        &config,
        "--grid",
        "10,20",
        "--instances",
        "2",
        "--out",
        json.to_str().unwrap(),
        "--format",
        "json",
        "--serial",
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["points"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 0.02, "null");
    let out = dir.path().join("x.csv");
    for (param, grid) in [("speed", "1,2"), ("bonus", "2,1"), ("bonus", "a,b")] {
        let run = cli(&[
            "experiment",
            "sweep",
            "--param",
            param,
            "--config",
            &config,
            "--grid",
            grid,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(!run.status.success(), "{param} {grid}");
        assert!(String::from_utf8_lossy(&run.stderr).contains("error"));
    }
}

#[test]
fn fit_alpha_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let mut text = String::from("varied_demand,observed_gamma,competitor_1,competitor_2\n");
    for d in [10.0f64, 30.0, 50.0, 70.0, 90.0] {
        let gamma = d.powf(1.2) / (d.powf(1.2) + 40f64.powf(1.2) + 60f64.powf(1.2));
        text.push_str(&format!("{d},{gamma},40,60\n"));
    }
    fs::write(&samples, text).unwrap();
    let run = cli(&[
        "calibrate",
        "fit-alpha",
        "--samples",
        samples.to_str().unwrap(),
        "--lo",
        "0.1",
        "--hi",
        "5",
    ]);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let fit: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert!((fit["alpha"].as_f64().unwrap() - 1.2).abs() < 1e-6);
    assert_eq!(fit["degenerate"], false);

    let run = cli(&[
        "calibrate",
        "fit-alpha",
        "--samples",
        dir.path().join("missing.csv").to_str().unwrap(),
    ]);
    assert!(!run.status.success());
}
