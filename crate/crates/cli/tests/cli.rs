use std::path::Path;
use std::process::{Command, Output};

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto-tem"))
        .args(args)
        .env("OTTO_TEM_THREADS", "1")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = otto(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_lists_every_subcommand() {
    let help = ok(&["--help"]);
    for cmd in [
        "reference",
        "dataset",
        "featurize",
        "evaluate",
        "qi-sweep",
        "report",
    ] {
        assert!(help.contains(cmd), "missing {cmd}");
    }
}

#[test]
fn dataset_featurize_evaluate() {
    let root = tempfile::tempdir().unwrap();
    let dir = root.path().join("ou");
    let out = ok(&[
        "dataset",
        "--model",
        "ou",
        "--n",
        "12",
        "--seed",
        "3",
        "--out",
        p(&dir),
    ]);
    assert!(out.contains("12 trajectories"));
    assert!(dir.join("manifest.json").exists());
    assert!(dir.join("trajectories/traj_00011.csv").exists());

    ok(&["featurize", "--method", "ssm", "--data", p(&dir)]);
    ok(&["featurize", "--method", "tem-silhouette", "--data", p(&dir)]);
    let out = ok(&[
        "evaluate",
        "--cv",
        "2",
        "--method",
        "ssm",
        "--method",
        "tem-silhouette",
        "--data",
        p(&dir),
    ]);
    assert_eq!(out.lines().count(), 2);

    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("metrics_ssm.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["method"], "ssm");
    assert_eq!(metrics["model"], "ou");
    assert_eq!(metrics["per_fold_auc"].as_array().unwrap().len(), 2);
    let roc = metrics["roc"].as_array().unwrap();
    assert_eq!(roc.first().unwrap()["fpr"], 0.0);
    assert_eq!(roc.last().unwrap()["tpr"], 1.0);
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let root = tempfile::tempdir().unwrap();
    let cfg = root.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"model": "ripple", "n_trajectories": 6, "window": 1}"#,
    )
    .unwrap();
    let dir = root.path().join("d");
    ok(&["--config", p(&cfg), "dataset", "--n", "4", "--out", p(&dir)]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["model"], "ripple");
    assert_eq!(manifest["records"].as_array().unwrap().len(), 4);
}

#[test]
fn reference_and_sweep() {
    let root = tempfile::tempdir().unwrap();
    let out = ok(&["reference", "--out", p(root.path())]);
    assert!(out.contains("reference:"));
    let csv = root.path().join("sweep.csv");
    let refdir = root.path().join("reference");
    ok(&[
        "qi-sweep",
        "--reference",
        p(&refdir),
        "--out",
        p(&csv),
        "--points",
        "2",
        "--runs",
        "1",
        "--protocol",
        "ml",
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "amplitude,run,seed,qi,wasserstein1,bottleneck,work_mean,work_var"
    );
    assert_eq!(lines.len(), 3);
}

#[test]
fn failures_are_reported_with_nonzero_status() {
    let root = tempfile::tempdir().unwrap();
    let out = otto(&["report", "--results", p(root.path())]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("missing results") && err.contains("jitter/ssm"),
        "{err}"
    );

    let out = otto(&["dataset", "--model", "wobble", "--out", p(root.path())]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("wobble"));

    let out = otto(&["featurize", "--method", "svm", "--data", p(root.path())]);
    assert!(!out.status.success());
}
