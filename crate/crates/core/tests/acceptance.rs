//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail for reasons recorded
//! in the README; they print FAIL with the reason but do not fail the run.
//! The run fails on any other failure, or when a known-red criterion passes.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use layers_core::experiment::{run, ExperimentConfig, ExperimentReport, EXPERIMENTS};
use layers_core::lattice::{lattice_marginal_ai, lattice_marginal_exact};
use layers_core::oracle::rat;
use layers_core::tree_paths::minimize_claim_f;
use layers_core::verify::{oracle_suite, Status};

const KNOWN_RED: &[u32] = &[2, 10];

type Outcome = Result<(bool, String), String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str, overrides: &[&str]) -> Result<ExperimentConfig, String> {
    let mut cfg = ExperimentConfig::from_file(&configs().join(name)).map_err(|e| format!("{name}: {e}"))?;
    cfg.apply_overrides(overrides).map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn report(name: &str, overrides: &[&str]) -> Result<ExperimentReport, String> {
    run(&load(name, overrides)?).map_err(|e| format!("{name}: {e}"))
}

fn num(r: &ExperimentReport, row: &[layers_core::experiment::Value], col: &str) -> Result<f64, String> {
    r.get(row, col).ok_or_else(|| format!("missing numeric column {col}"))
}

fn stat<'a>(r: &'a ExperimentReport, key: &str, value: &'a str) -> Result<&'a Vec<layers_core::experiment::Value>, String> {
    r.rows_where(key, value).next().ok_or_else(|| format!("no row with {key} = {value}"))
}

fn within_3sigma(est: f64, se: f64, reference: f64) -> bool {
    (est - reference).abs() <= 3.0 * se
}

fn c1_layer_marginals() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for m in [2, 3, 4] {
        let r = report("c01_layer_marginal.conf", &[&format!("generator=star:{m}")])?;
        for row in &r.rows {
            let (p, se, e) = (num(&r, row, "estimate")?, num(&r, row, "stderr")?, num(&r, row, "expected")?);
            ok &= within_3sigma(p, se, e);
            worst = worst.max((p - e).abs() / se);
        }
        ok &= r.rows.len() == m + 1;
    }
    Ok((ok, format!("max |p - 1/(m+1)| = {worst:.2} sigma")))
}

fn c2_exact_oracle() -> Outcome {
    let rows = oracle_suite().map_err(|e| e.to_string())?;
    let mismatches = rows.iter().filter(|r| r.status == Status::Mismatch).count();
    let groups = ["tree-marginal", "b-pair", "b-exact", "lattice-displayed"];
    let counts: Vec<String> =
        groups.iter().map(|g| format!("{g} {}", rows.iter().filter(|r| r.group == *g).count())).collect();
    let display = rows.iter().find(|r| r.group == "lattice-displayed").ok_or("no lattice row")?;
    let display_ok = display.formula == display.oracle;
    let detail = format!(
        "{} ({}), {mismatches} mismatches; lattice d=2 display {} vs oracle {}",
        counts.join(", "),
        rows.len(),
        display.formula,
        display.oracle
    );
    Ok((mismatches == 0 && display_ok, detail))
}

fn c3_claim_min() -> Outcome {
    let ((x, y), f) = minimize_claim_f(50);
    Ok(((x, y) == (3, 3) && f == rat(1, 3), format!("min f = {f} at ({x},{y})")))
}

fn c4_t2_structure() -> Outcome {
    let r = report("c04_t2_scan.conf", &[])?;
    let mut samples = 0.0;
    for row in &r.rows {
        samples += num(&r, row, "trials")?;
    }
    Ok((
        r.violations == 0 && samples >= 1e4,
        format!("{samples} samples over {} generators, {} violations", r.rows.len(), r.violations),
    ))
}

fn c5_t2_decay() -> Outcome {
    let ivn = report("c05_t2_ivn.conf", &[])?;
    let mut ok = ivn.violations == 0 && ivn.rows.len() == 5;
    let mut parts = Vec::new();
    for row in &ivn.rows {
        let (n, p, b) = (num(&ivn, row, "n")?, num(&ivn, row, "estimate")?, num(&ivn, row, "bound")?);
        parts.push(format!("n={n}: {p:.2e} <= {b:.2e}"));
    }
    let sums = report("c05_t2_sums.conf", &[])?;
    let s: Vec<f64> = sums.rows.iter().map(|row| num(&sums, row, "s_n_float")).collect::<Result<_, _>>()?;
    ok &= sums.violations == 0 && s.len() == 6 && s.windows(2).all(|w| w[1] <= w[0]);
    Ok((ok, format!("{}; S_1..S_6 non-increasing: {}", parts.join(", "), sums.violations == 0)))
}

fn c6_tree_second_moment() -> Outcome {
    let r = report("c06_tree_good.conf", &[])?;
    let mut ok = r.rows.len() == 4;
    let mut parts = Vec::new();
    let mut pg = Vec::new();
    for row in &r.rows {
        let (k, z, se, p) = (num(&r, row, "k")?, num(&r, row, "mean_z")?, num(&r, row, "stderr_z")?, num(&r, row, "p_good")?);
        ok &= within_3sigma(z, se, 1.0) && p > 0.0;
        pg.push(p);
        parts.push(format!("k={k}: E[Z]={z:.3}+-{se:.3} P(good)={p:.3}"));
    }
    let n = pg.len();
    let change = (pg[n - 1] - pg[n - 2]).abs() / pg[n - 2];
    ok &= change <= 0.2;
    Ok((ok, format!("{}; P(good) change k=4->5 {change:.3}", parts.join(", "))))
}

fn c7_eit() -> Outcome {
    let eit = report("c07_lattice_eit.conf", &[])?;
    let mut ok = true;
    let mut worst = 0.0f64;
    for row in &eit.rows {
        let name = row[eit.column("statistic").unwrap()].csv_cell();
        if name == "p_tau_1" || name == "p_tau_2" {
            let (p, se, r) = (num(&eit, row, "estimate")?, num(&eit, row, "stderr")?, num(&eit, row, "reference")?);
            ok &= within_3sigma(p, se, r);
            worst = worst.max((p - r).abs() / se);
        }
    }
    let pairs = report("c07_lattice_pairs.conf", &[])?;
    let r3 = num(&pairs, stat(&pairs, "statistic", "p123/p12")?, "estimate")?;
    let r4 = num(&pairs, stat(&pairs, "statistic", "p1234/p12")?, "estimate")?;
    ok &= (r3 - 2.0).abs() <= 0.3 && (r4 - 4.0).abs() <= 0.5;
    Ok((ok, format!("tau max deviation {worst:.2} sigma; d=20 ratios {r3:.3}, {r4:.3}")))
}

fn c8_lattice_bound() -> Outcome {
    let mut ok = true;
    let mut min_scaled = f64::INFINITY;
    for d in 2..=100i64 {
        let bound = rat(9, 8 * d * d);
        let (disp, exact) = (lattice_marginal_ai(d as usize), lattice_marginal_exact(d as usize));
        ok &= disp > bound && exact > bound;
        let scaled = layers_core::oracle::rat_to_f64(&(disp / &bound));
        min_scaled = min_scaled.min(scaled);
    }
    Ok((ok, format!("display and exact both above 9/(8d^2); min display/bound {min_scaled:.4}")))
}

fn c9_chain() -> Outcome {
    let r = report("c09_lattice_chain.conf", &[])?;
    let tv = num(&r, stat(&r, "statistic", "tv_displayed")?, "value")?;
    let tv_exact = num(&r, stat(&r, "statistic", "tv_exact")?, "value")?;
    Ok((tv < 0.01, format!("TV displayed law {tv:.4}, exact law {tv_exact:.4}")))
}

fn c10_crossing() -> Outcome {
    let r = report("c10_lattice_cross.conf", &[])?;
    let mut crossed = Vec::new();
    let mut parts = Vec::new();
    for row in &r.rows {
        let (d, c, o, x) = (num(&r, row, "d")?, num(&r, row, "crossed")?, num(&r, row, "origin_open")?, num(&r, row, "exhausted")?);
        crossed.push(c);
        parts.push(format!("d={d}: {c}/200 (origin open {o}, exhausted {x})"));
    }
    let monotone = crossed.windows(2).all(|w| w[1] >= w[0]);
    let positive = crossed.last().is_some_and(|&c| c > 0.0);
    Ok((
        monotone && positive,
        format!("{}; non-decreasing {monotone}, positive at d=20 {positive}", parts.join(", ")),
    ))
}

fn c11_cycles() -> Outcome {
    let r = report("c11_cycles.conf", &[])?;
    let mut ok = r.rows.len() == 4;
    let mut parts = Vec::new();
    for row in &r.rows {
        let (i, m, se, l) = (num(&r, row, "i")?, num(&r, row, "mean")?, num(&r, row, "stderr")?, num(&r, row, "poisson_mean")?);
        ok &= within_3sigma(m, se, l);
        parts.push(format!("Y{i}={m:.3}+-{se:.3} (lambda {l})"));
    }
    Ok((ok, parts.join(", ")))
}

fn c12_giant() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["c12_randgraph_regular.conf", "c12_randgraph_mixed.conf"] {
        let r = report(name, &[])?;
        let mut min = f64::INFINITY;
        for row in &r.rows {
            min = min.min(num(&r, row, "min_fraction")?);
        }
        let last = r.rows.last().ok_or("no rows")?;
        let change = num(&r, last, "relative_change")?;
        let mean = num(&r, last, "mean_fraction")?;
        ok &= r.rows.len() == 3 && min > 0.0 && change < 0.2;
        parts.push(format!("{}: min {min:.4}, mean(n=1e5) {mean:.4}, change {change:.4}", r.config["degrees"]));
    }
    Ok((ok, parts.join("; ")))
}

/// Small settings for every experiment, for the replay check.
fn replay_config(name: &str) -> String {
    let extra = match name {
        "layer-marginal" => "generator = star:3\ntrials = 500",
        "sample" => "generator = regular:3:20",
        "tk-largest" => "generator = regular:3:200\ntrials = 20",
        "tree-good" => "ks = 2,3\ntrials = 100",
        "t2-scan" => "trials = 20",
        "t2-ivn" => "generator = tree:3:6\nns = 3,4\ntrials = 200",
        "t2-sums" => "generator = tree:3:5\nn_max = 4",
        "lattice-eit" => "d = 2,5\nhorizon = 32\ntrials = 500",
        "lattice-pairs" => "d = 8\nhorizon = 32\ntrials = 500",
        "lattice-a" => "d = 2\nblocks = 2\ntrials = 500",
        "lattice-cross" => "d = 3,5\nk = 4\nradius = 8\ntrials = 20",
        "lattice-chain" => "trials = 2000",
        "randgraph-t3" => "sizes = 200,400\ntrials = 5",
        "er-scan" => "c = 1,4\nn = 300\ntrials = 5",
        "cycles" => "n = 300\ntrials = 20",
        "nice" => "k = 15\ntrials = 5",
        "growth" => "max_level = 100",
        "verify" => "trials = 1",
        other => panic!("no replay settings for {other}"),
    };
    format!("experiment = {name}\nseed = 7\n{extra}\n")
}

fn cli_csv(bin: &str, config: &Path, workers: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(bin)
        .args(["run", "--config"])
        .arg(config)
        .env("LAYERS_WORKERS", workers)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() == Some(1) {
        return Err(format!("{}: {}", config.display(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn c13_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_layers");
    let dir = std::env::temp_dir().join(format!("layers_replay_{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut differing = Vec::new();
    for name in EXPERIMENTS {
        let path = dir.join(format!("{name}.conf"));
        std::fs::write(&path, replay_config(name)).map_err(|e| e.to_string())?;
        let a = cli_csv(bin, &path, "1")?;
        let b = cli_csv(bin, &path, "1")?;
        let c = cli_csv(bin, &path, "4")?;
        if a.is_empty() || a != b || a != c {
            differing.push(*name);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok((
        differing.is_empty(),
        format!("{} experiments replayed at 1, 1 and 4 workers; differing: {differing:?}", EXPERIMENTS.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "layer marginals on stars", c1_layer_marginals),
        (2, "closed forms equal the exact oracle", c2_exact_oracle),
        (3, "claim minimum", c3_claim_min),
        (4, "T_2 is a monotone forest", c4_t2_structure),
        (5, "T_2 decay and weighted sums", c5_t2_decay),
        (6, "tree second moment", c6_tree_second_moment),
        (7, "meeting times and pair ratios", c7_eit),
        (8, "lattice marginal bound", c8_lattice_bound),
        (9, "chain law", c9_chain),
        (10, "T_4(Z^d) crossing frequency", c10_crossing),
        (11, "cycle Poisson means", c11_cycles),
        (12, "T_3 giant component", c12_giant),
        (13, "determinism across worker counts", c13_determinism),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let red = KNOWN_RED.contains(&id);
        match outcome {
            Ok((true, detail)) => {
                println!("PASS criterion {id:>2} ({name}): {detail} [{secs:.1}s]");
                if red {
                    println!("     criterion {id} is listed as known-red but passed; update KNOWN_RED");
                    unexpected.push(id);
                }
            }
            Ok((false, detail)) => {
                let tag = if red { " (known-red, see README)" } else { "" };
                println!("FAIL criterion {id:>2} ({name}){tag}: {detail} [{secs:.1}s]");
                if !red {
                    unexpected.push(id);
                }
            }
            Err(e) => {
                println!("FAIL criterion {id:>2} ({name}): error: {e} [{secs:.1}s]");
                unexpected.push(id);
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: ok (known-red: {KNOWN_RED:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
