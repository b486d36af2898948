// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use ddme_cli::config::{Experiment, ExperimentConfig, KernelSpec, TaskName};
use ddme_cli::exit;
use ddme_cli::pipeline::{compare, run_sweep, run_task};
use ddme_core::krotov::{ddme_krotov, KrotovConfig};

const BIN: &str = env!("CARGO_BIN_EXE_ddme");

fn small(task: TaskName) -> ExperimentConfig {
    let mut config = ExperimentConfig::for_task(task);
    config.ensemble.count = Some(64);
    config
}

fn write_config(dir: &Path, config: &ExperimentConfig) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string(config).unwrap()).unwrap();
    path
}

fn ddme(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("run ddme binary")
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn optimize_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::Hadamard));
    let out = tmp.path().join("out");
    let args = ["optimize", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];

    let first = ddme(&args);
    assert_eq!(first.status.code(), Some(exit::SUCCESS), "{}", String::from_utf8_lossy(&first.stderr));
    let files = read_dir(&out);
    for name in [
        "pulses.csv",
        "optimization_trace.csv",
        "summary.json",
        "trajectory_se_master.csv",
        "trajectory_se_ensemble.csv",
        "trajectory_ddme_master.csv",
        "trajectory_ddme_ensemble.csv",
    ] {
        assert!(files.contains_key(name), "missing {name}");
    }

    let second = ddme(&args);
    assert_eq!(second.status.code(), Some(exit::SUCCESS));
    assert_eq!(files, read_dir(&out));
}

#[test]
fn zero_disorder_gives_equal_se_and_ddme_fidelity() {
    let mut config = small(TaskName::ZGate);
    config.kernel = Some(KernelSpec::Gaussian {
        c0: Some(0.0),
        t_corr: None,
    });
    let exp = Experiment::from_config(&config).unwrap();
    let outcome = run_task(&exp).unwrap();
    let s = outcome.summary(&exp).unwrap();
    assert!((s.final_fidelity_se - s.final_fidelity_ddme).abs() <= 1e-9);
    assert!((s.final_purity_ddme - 1.0).abs() <= 1e-9);
}

#[test]
fn single_sweep_series_matches_standalone_run() {
    let mut config = small(TaskName::ZGate);
    let iterations = 5;
    config.sweep.t_corr = Some(vec![100.0]);
    config.sweep.iterations = Some(iterations);
    let exp = Experiment::from_config(&config).unwrap();
    let sweep = run_sweep(&exp).unwrap();

    let standalone = KrotovConfig {
        j_tol: 1e-12,
        max_iterations: iterations,
        ..exp.ddme.clone()
    };
    let trace = ddme_krotov(&exp.problem, &sweep.se.pulses, &standalone).unwrap();
    assert_eq!(trace.iterations, iterations);
    assert_eq!(sweep.series.len(), 1);
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&sweep.series[0].costs), bits(&trace.costs));
}

#[test]
fn sweep_writes_one_row_per_iteration_and_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::ZGate));
    let out = tmp.path().join("sweep");
    let o = ddme(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--t-corr",
        "1,50",
        "--iterations",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(exit::SUCCESS), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_corr,iteration,J_T"));
    assert_eq!(lines.count(), 2 * 4);
}

#[test]
fn compare_of_identical_pulses_reports_identical_metrics() {
    let exp = Experiment::from_config(&small(TaskName::XGate)).unwrap();
    let pulses = exp.guess.clone();
    let report = compare(&exp, ("a", &pulses), ("b", &pulses)).unwrap();
    assert_eq!(report.a.metrics, report.b.metrics);
    assert_eq!(report.fidelity_gap, 0.0);
}

#[test]
fn written_pulses_reproduce_the_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::ZGate));
    let out = tmp.path().join("out");
    let (cfg, out_s) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(ddme(&["optimize", "--config", cfg, "--out", out_s]).status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();

    let pulses = format!("{}#f_ddme", out.join("pulses.csv").display());
    let prop = tmp.path().join("prop");
    let o = ddme(&["propagate", "--config", cfg, "--pulses", &pulses, "--out", prop.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read(prop.join("trajectory_ddme_master.csv")).unwrap(),
        fs::read(out.join("trajectory_ddme_master.csv")).unwrap()
    );

    let o = ddme(&["ensemble", "--config", cfg, "--pulses", &pulses, "--out", prop.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read(prop.join("trajectory_ddme_ensemble.csv")).unwrap(),
        fs::read(out.join("trajectory_ddme_ensemble.csv")).unwrap()
    );

    let o = ddme(&[
        "compare",
        "--config",
        cfg,
        "--a",
        &format!("{}#f_se", out.join("pulses.csv").display()),
        "--b",
        &pulses,
        "--out",
        prop.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(prop.join("compare.json")).unwrap()).unwrap();
    assert_eq!(report["b"]["final_fidelity"], summary["final_fidelity_ddme"]);
    assert_eq!(report["a"]["final_fidelity"], summary["final_fidelity_se"]);
}

#[test]
fn ensemble_bloch_vectors_stay_in_the_ball() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::XGate));
    let out = tmp.path().join("out");
    let o = ddme(&["optimize", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["trajectory_se_ensemble.csv", "trajectory_ddme_ensemble.csv"] {
        let mut reader = csv::Reader::from_path(out.join(name)).unwrap();
        let mut rows = 0;
        for record in reader.records() {
            let record = record.unwrap();
            let r: Vec<f64> = (4..7).map(|c| record[c].parse().unwrap()).collect();
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= 1.0 + 1e-9, "{name}: |r| = {norm}");
            rows += 1;
        }
        assert_eq!(rows, 101);
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::ZGate));
    let cfg = cfg.to_str().unwrap();
    let out = tmp.path().join("nc");

    let o = ddme(&["optimize", "--config", cfg, "--iterations", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(exit::NOT_CONVERGED));
    assert!(out.join("summary.json").exists());

    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"task": "z-gate", "grid": {"steps": 0}}"#).unwrap();
    assert_eq!(ddme(&["optimize", "--config", bad.to_str().unwrap()]).status.code(), Some(exit::CONFIG));
    fs::write(&bad, r#"{"task": "z-gate", "unknown": 1}"#).unwrap();
    assert_eq!(ddme(&["optimize", "--config", bad.to_str().unwrap()]).status.code(), Some(exit::CONFIG));
    fs::write(&bad, r#"{"task": "z-gate", "kernel": {"kind": "white_noise", "alpha": 0.1}}"#).unwrap();
    assert_eq!(ddme(&["sweep", "--config", bad.to_str().unwrap()]).status.code(), Some(exit::CONFIG));
    fs::write(&bad, r#"{"task": "z-gate", "sweep": {"t_corr": []}}"#).unwrap();
    assert_eq!(ddme(&["sweep", "--config", bad.to_str().unwrap()]).status.code(), Some(exit::CONFIG));

    let missing = tmp.path().join("missing.json");
    assert_eq!(ddme(&["optimize", "--config", missing.to_str().unwrap()]).status.code(), Some(exit::IO));
    let o = ddme(&["propagate", "--config", cfg, "--pulses", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(exit::IO));
}

#[test]
fn pulse_file_on_another_grid_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &small(TaskName::ZGate));
    let out = tmp.path().join("out");
    let (cfg_s, out_s) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(ddme(&["optimize", "--config", cfg_s, "--iterations", "1", "--out", out_s]).status.code(), Some(3));

    let mut other = small(TaskName::ZGate);
    other.grid.steps = Some(50);
    let other_cfg = tmp.path().join("other.json");
    fs::write(&other_cfg, serde_json::to_string(&other).unwrap()).unwrap();
    let pulses = format!("{}#f_ddme", out.join("pulses.csv").display());
    let o = ddme(&["propagate", "--config", other_cfg.to_str().unwrap(), "--pulses", &pulses, "--out", out_s]);
    assert_eq!(o.status.code(), Some(exit::CONFIG));
}
