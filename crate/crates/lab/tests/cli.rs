use std::fs;
use std::process::Command;

use condensation_core::PlaneTree;
use condensation_lab::report::Report;

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_condensation-lab"))
}

#[test]
fn sample_prints_valid_trees() {
    let out = lab()
        .args(["sample", "--dist", "theta=2.5,m=0.5", "--n", "50", "--count", "5", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert_eq!(PlaneTree::from_csv_row(r).unwrap().len(), 50);
    }
}

#[test]
fn sample_is_seeded() {
    let run = |seed: &str| {
        lab()
            .args(["sample", "--dist", "theta=1.5,m=0.5", "--n", "200", "--count", "3", "--seed", seed])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}

#[test]
fn oracle_pmf_sums_to_one() {
    let out = lab()
        .args(["oracle", "--dist", "finite:0.6,0.2,0.1,0,0.1", "--n", "7", "--statistic", "delta"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta,probability"));
    let total: f64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn bad_arguments_are_rejected() {
    let out = lab().args(["sample", "--dist", "theta=0.5", "--n", "10"]).output().unwrap();
    assert!(!out.status.success());
    let out = lab()
        .args(["oracle", "--dist", "theta=2.5,m=0.5", "--n", "30"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn exp_writes_report_and_exit_code_follows_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "experiments = [\"exact\", \"E-luka\"]\nluka_trees = 200\ntv_samples = 20000\n").unwrap();
    let out_dir = dir.path().join("out");
    let status = lab()
        .args(["exp", "--config"])
        .arg(&cfg)
        .args(["--seed", "5", "--threads", "2", "--out"])
        .arg(&out_dir)
        .status()
        .unwrap();
    let text = fs::read_to_string(out_dir.join("report.json")).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(report.seed, 5);
    assert_eq!(report.experiments.len(), 2);
    assert_eq!(status.success(), report.passed());
    assert!(report.experiments.iter().flat_map(|e| &e.checks).all(|c| c.consistent()));
    assert!(out_dir.join("timing.json").exists());
    assert!(out_dir.join("exact_kemperman.csv").exists());
}

#[test]
fn unknown_config_keys_fail() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "treez = 10\n").unwrap();
    let out = lab().args(["exp", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
