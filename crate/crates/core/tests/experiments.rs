use std::process::Command;

use layers_core::experiment::{run, ExperimentConfig, ExperimentReport, Format, GraphGenerator};
use layers_core::seed::{par_trials_with, trial_rng};
use rand::Rng;

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).unwrap()
}

#[test]
fn json_round_trip_keeps_rows_and_config() {
    let r = run(&cfg("experiment = lattice-chain\ntrials = 500\nseed = 3\n")).unwrap();
    let back = ExperimentReport::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_csv(), r.to_csv());
}

#[test]
fn csv_echoes_config_and_used_defaults() {
    let r = run(&cfg("experiment = layer-marginal\ngenerator = star:2\ntrials = 100\nseed = 1\n")).unwrap();
    let csv = r.to_csv();
    assert!(csv.contains("# generator = star:2\n"));
    assert!(csv.contains("# vertex = 0\n"));
    assert!(csv.contains("# violations = 0\n"));
    assert!(csv.contains("\nlayer,count,trials,estimate,stderr,expected\n"));
    assert_eq!(r.rows.len(), 3);
}

#[test]
fn trial_streams_do_not_depend_on_worker_count() {
    let draw = |t: u64| trial_rng(42, "streams", t).random::<u64>();
    let one = par_trials_with(300, 1, draw);
    for w in [2, 3, 8] {
        assert_eq!(par_trials_with(300, w, draw), one);
    }
}

#[test]
fn same_seed_same_csv() {
    for text in [
        "experiment = t2-scan\ntrials = 10\nseed = 5\n",
        "experiment = tk-largest\ngenerator = degrees:random:3,4,5:100\ntrials = 8\nseed = 5\n",
        "experiment = cycles\nn = 200\ntrials = 10\nseed = 5\n",
    ] {
        assert_eq!(run(&cfg(text)).unwrap().to_csv(), run(&cfg(text)).unwrap().to_csv());
    }
    let a = run(&cfg("experiment = sample\nseed = 1\n")).unwrap();
    let b = run(&cfg("experiment = sample\nseed = 2\n")).unwrap();
    assert_ne!(a.rows, b.rows);
}

#[test]
fn bad_configs_are_rejected() {
    assert!(run(&cfg("experiment = t2-sums\ngenerator = regular:3:20\n")).is_err());
    assert!(run(&cfg("experiment = lattice-pairs\nd = 3\ntrials = 10\n")).is_err());
    assert!(run(&cfg("experiment = cycles\nk_max = 9\nn = 50\ntrials = 2\n")).is_err());
    assert!(GraphGenerator::parse("wheel:5").is_err());
    assert_eq!(Format::from_path(std::path::Path::new("x.json")), Format::Json);
}

fn layers() -> Command {
    Command::new(env!("CARGO_BIN_EXE_layers"))
}

#[test]
fn cli_runs_and_reports_exit_codes() {
    let out = layers().args(["sample", "--generator", "path:5", "--seed", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("vertex,age_rank,layer\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);

    let out = layers().args(["lattice-query", "--seed", "1", "--point", "0,-1,2", "--k", "4"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("layer = "));

    let out = layers().args(["run", "--config", "/nonexistent.conf"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = layers()
        .args(["tree-good", "--ks", "2", "--trials", "20", "--format", "json", "--set", "seed=9"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = ExperimentReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(r.config["seed"], "9");
    assert_eq!(r.rows.len(), 1);
}

#[test]
fn cli_writes_output_file_by_extension() {
    let dir = std::env::temp_dir().join(format!("layers_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t2.json");
    let out = layers()
        .args(["t2-scan", "--generators", "cycle:8;star:4", "--trials", "20", "-o"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = ExperimentReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.violations, 0);
    assert_eq!(r.rows.len(), 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_flags_override_keys() {
    let dir = std::env::temp_dir().join(format!("layers_cfg_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lm.conf");
    std::fs::write(&path, "experiment = layer-marginal\ngenerator = star:4\ntrials = 50\n").unwrap();
    let out = layers().args(["run", "--config"]).arg(&path).args(["--set", "generator=star:2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# generator = star:2\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
    let _ = std::fs::remove_dir_all(&dir);
}
