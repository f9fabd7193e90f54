//! End-to-end checks of the experiment runner binary: config ingestion,
//! CSV/manifest output, determinism, and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_onebit-mimo")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("onebit-mimo-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, overrides: &[(&str, serde_json::Value)]) -> PathBuf {
    let mut cfg = serde_json::json!({
        "M": 32, "K": 4, "K_max": 16, "tau0": 2, "T": 100, "rho_u": 0.1, "gamma": 0.5,
        "r_min": 100.0, "r_max": 500.0, "d_bar": 6.309573444801932, "kappa": 3.8, "seed": 3
    });
    for (key, value) in overrides {
        cfg[*key] = value.clone();
    }
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(binary()).args(args).output().expect("binary runs")
}

#[test]
fn rejects_unknown_config_keys() {
    let dir = temp_dir("badcfg");
    let path = write_config(&dir, &[("bandwidth", serde_json::json!(20.0))]);
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "fig2",
        "--out",
        dir.join("out").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("configuration"), "stderr: {stderr}");
}

#[test]
fn rejects_invalid_pilot_split() {
    let dir = temp_dir("badsplit");
    // tau0 * K = 120 >= T = 100
    let path = write_config(&dir, &[("tau0", serde_json::json!(30))]);
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "fig2",
        "--out",
        dir.join("out").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn fig2_emits_curves_and_is_byte_deterministic() {
    let dir = temp_dir("fig2");
    let path = write_config(&dir, &[]);
    let mut csvs: Vec<Vec<u8>> = Vec::new();
    for tag in ["a", "b"] {
        let out_dir = dir.join(tag);
        let out = run(&[
            "--config",
            path.to_str().unwrap(),
            "--experiment",
            "fig2",
            "--antennas",
            "16",
            "--trials",
            "10",
            "--power-db",
            "-10:0:5",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
        let csv_path = out_dir.join("fig2_mrc_m16.csv");
        let text = fs::read_to_string(&csv_path).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("rho_db,rho_linear,mc_sum_se"));
        assert_eq!(lines.count(), 3, "three grid points expected");
        assert!(out_dir.join("manifest.json").exists());
        csvs.push(fs::read(&csv_path).unwrap());
    }
    assert_eq!(csvs[0], csvs[1], "same seed must give byte-identical CSVs");
}

#[test]
fn fig2_seed_override_changes_the_numbers() {
    let dir = temp_dir("fig2seed");
    let path = write_config(&dir, &[]);
    let mut outputs = Vec::new();
    for (tag, seed) in [("s3", "3"), ("s4", "4")] {
        let out_dir = dir.join(tag);
        let out = run(&[
            "--config",
            path.to_str().unwrap(),
            "--experiment",
            "fig2",
            "--antennas",
            "16",
            "--trials",
            "10",
            "--power-db",
            "-5:-5:1",
            "--seed",
            seed,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        outputs.push(fs::read(out_dir.join("fig2_mrc_m16.csv")).unwrap());
    }
    assert_ne!(outputs[0], outputs[1]);
}

#[test]
fn fig3_reports_power_spread_summary() {
    let dir = temp_dir("fig3");
    let path = write_config(&dir, &[]);
    let out_dir = dir.join("out");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "fig3",
        "--antennas",
        "16,32",
        "--trials",
        "25",
        "--processing",
        "zf",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(out_dir.join("fig3_zf_summary.csv")).unwrap();
    assert!(summary.lines().next().unwrap().contains("normalized_spread"));
    assert_eq!(summary.lines().count(), 3);
    let cdf = fs::read_to_string(out_dir.join("fig3_zf_m16_cdf.csv")).unwrap();
    // one sample per antenna per realization, plus the header
    assert_eq!(cdf.lines().count(), 16 * 25 + 1);
    // CDF column ends at 1
    let last = cdf.lines().last().unwrap();
    assert!(last.ends_with("1.0000000000e0"), "last row: {last}");
}

#[test]
fn pareto_emits_three_frontiers() {
    let dir = temp_dir("pareto");
    let path = write_config(&dir, &[("K_max", serde_json::json!(40)), ("T", serde_json::json!(200))]);
    let out_dir = dir.join("out");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "pareto",
        "--antennas",
        "100",
        "--weights",
        "7",
        "--power-db",
        "-25:5:1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for name in
        ["pareto_onebit_mrc_m100.csv", "pareto_benchmark_mrc_m100.csv", "pareto_unquantized_mrc_m100.csv"]
    {
        let text = fs::read_to_string(out_dir.join(name)).unwrap();
        assert!(text.lines().count() >= 2, "{name} should have rows");
        assert!(text.starts_with("w_se,w_ee,se_bit_per_s_per_hz"));
        // frontier rows are sorted by SE with non-increasing EE
        let rows: Vec<(f64, f64)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let cells: Vec<&str> = l.split(',').collect();
                (cells[2].parse().unwrap(), cells[3].parse().unwrap())
            })
            .collect();
        for pair in rows.windows(2) {
            assert!(pair[1].0 > pair[0].0, "{name}: SE must increase");
            assert!(pair[1].1 < pair[0].1, "{name}: EE must decrease");
        }
    }
}

#[test]
fn optimal_sweep_emits_one_row_per_antenna_count() {
    let dir = temp_dir("optimal");
    let path = write_config(&dir, &[("K_max", serde_json::json!(30)), ("T", serde_json::json!(200))]);
    let out_dir = dir.join("out");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "optimal-tau0",
        "--antennas",
        "64,100",
        "--power-db",
        "-25:0:1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(out_dir.join("optimal_tau0_mrc.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("m,coherence,k_star"));
}

#[test]
fn duality_check_summarizes_both_models() {
    let dir = temp_dir("duality");
    let path = write_config(&dir, &[]);
    let out_dir = dir.join("out");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "duality-check",
        "--trials",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(out_dir.join("duality_mrc_summary.csv")).unwrap();
    let rows: Vec<&str> = summary.lines().collect();
    assert_eq!(rows.len(), 4, "header + three cases");
    assert!(rows[1].starts_with("approx,"));
    assert!(rows[2].starts_with("exact,"));
    // the solver-model roundtrip is numerically exact
    let approx_max: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!(approx_max < 1e-9, "approx mismatch {approx_max}");
}

#[test]
fn validation_writes_report_and_exits_zero() {
    let dir = temp_dir("validate");
    let path = write_config(&dir, &[]);
    let out_dir = dir.join("out");
    let out = run(&[
        "--config",
        path.to_str().unwrap(),
        "--experiment",
        "validation",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(out_dir.join("validation_report.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&report).unwrap();
    let checks = value["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    for check in checks {
        assert_eq!(check["passed"], true, "check failed: {check}");
        assert!(check["tolerance"].is_number());
        assert!(check["observed"].is_number());
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("arcsine_law"));
}
