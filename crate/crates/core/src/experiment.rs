//! Config-driven experiment runner and CSV / JSON reports.
//!
//! Every trial draws from `seed::trial_rng(master, tag, trial)` and results
//! are collected in trial order, so a report depends only on its config.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LayersError, Result};
use crate::graph::{
    erdos_renyi, generate_profile_tree, simple_graph_from_sequence, DegreeProfile, Graph, LatticePoint,
};
use crate::lattice::{
    chain_tv, chain_weighted_moment, check_lattice_a, default_a_prime, lattice_marginal_ai, lattice_marginal_exact,
    pair_hits, sample_walk_pair, search_open_monotone_path, tail_from_intersections, ChainParams, LatticeEventModel,
    PairStart, DEFAULT_NODE_BUDGET, DEFAULT_PAIR_HORIZON,
};
use crate::layers::{compute_layers, lattice_layer, sample_ages, sample_csv, LazyAgeSource};
use crate::oracle::rat_to_f64;
use crate::randgraph::{
    configuration_cycle_means, er_t3_phase_scan, largest_tk_fraction, t3_giant_experiment, SequenceSpec, SIMPLE_ATTEMPTS,
};
use crate::seed::{mean_stderr, par_trials, trial_rng};
use crate::t2_forest::{analyze_t2, i_vn_bound, i_vn_event, weighted_sum_recurrence_check};
use crate::tree_paths::{growth_condition_profile, is_k_good, nice_w_size, NiceConfig, ZkEvaluator};

pub const EXPERIMENTS: &[&str] = &[
    "layer-marginal",
    "sample",
    "tk-largest",
    "tree-good",
    "t2-scan",
    "t2-ivn",
    "t2-sums",
    "lattice-eit",
    "lattice-pairs",
    "lattice-a",
    "lattice-cross",
    "lattice-chain",
    "randgraph-t3",
    "er-scan",
    "cycles",
    "nice",
    "growth",
    "verify",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub generator: Option<String>,
    pub k: Option<u32>,
    pub trials: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub output: Option<String>,
    /// Experiment-specific keys.
    pub params: BTreeMap<String, String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            generator: None,
            k: None,
            trials: 1000,
            sizes: Vec::new(),
            seed: 0,
            output: None,
            params: BTreeMap::new(),
        }
    }
}

/// Integer that may be written as `1e5`.
pub fn parse_size(text: &str) -> Result<usize> {
    let t = text.trim();
    if let Ok(v) = t.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| LayersError::Parse(format!("'{t}' is not a size")))?;
    if f < 0.0 || f.fract() != 0.0 || f > 1e15 {
        return Err(LayersError::Parse(format!("'{t}' is not a size")));
    }
    Ok(f as usize)
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(text: &str, f: F) -> Result<Vec<T>> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> ExperimentConfig {
        ExperimentConfig { experiment: experiment.to_string(), ..Default::default() }
    }

    /// `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LayersError::Parse(format!("line {}: expected key = value", no + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |e: String| LayersError::InvalidConfig(format!("{key}: {e}"));
        match key {
            "experiment" => self.experiment = value.to_string(),
            "generator" => self.generator = Some(value.to_string()),
            "k" => self.k = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "trials" => self.trials = parse_size(value)?,
            "sizes" => self.sizes = parse_list(value, parse_size)?,
            "seed" => self.seed = value.parse().map_err(|e| bad(format!("{e}")))?,
            "output" => self.output = Some(value.to_string()),
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .as_ref()
                .split_once('=')
                .ok_or_else(|| LayersError::InvalidConfig(format!("override '{}' is not key=value", o.as_ref())))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(LayersError::UnknownExperiment(self.experiment.clone()));
        }
        if self.trials == 0 {
            return Err(LayersError::InvalidConfig("trials must be positive".into()));
        }
        Ok(())
    }

    /// Every field except `output`, as strings.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = self.params.clone();
        m.insert("experiment".into(), self.experiment.clone());
        if let Some(g) = &self.generator {
            m.insert("generator".into(), g.clone());
        }
        if let Some(k) = self.k {
            m.insert("k".into(), k.to_string());
        }
        m.insert("trials".into(), self.trials.to_string());
        if !self.sizes.is_empty() {
            m.insert("sizes".into(), self.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
        }
        m.insert("seed".into(), self.seed.to_string());
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    /// Non-finite values become text so that JSON stays round-trippable.
    pub fn float(x: f64) -> Value {
        if x.is_finite() {
            Value::Float(x)
        } else {
            Value::Text(format!("{x}"))
        }
    }

    pub fn int<T: TryInto<i64>>(x: T) -> Value {
        Value::Int(x.try_into().unwrap_or(i64::MAX))
    }

    pub fn text<S: Into<String>>(s: S) -> Value {
        Value::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            Value::Text(t) => t.parse().ok(),
        }
    }

    pub fn csv_cell(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(f) => format!("{f}"),
            Value::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
            Value::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Invariant violations observed; the CLI exits nonzero when positive.
    pub violations: usize,
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl ExperimentReport {
    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rows whose `key` column equals `value` as text.
    pub fn rows_where<'a>(&'a self, key: &str, value: &'a str) -> impl Iterator<Item = &'a Vec<Value>> + 'a {
        let i = self.column(key);
        self.rows.iter().filter(move |r| i.is_some_and(|i| r[i].csv_cell() == value))
    }

    pub fn get(&self, row: &[Value], column: &str) -> Option<f64> {
        self.column(column).and_then(|i| row[i].as_f64())
    }

    /// Config echo as `# key = value`, then the header and rows. The wall
    /// clock is left out so that replays are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        s.push_str(&format!("# violations = {}\n", self.violations));
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(Value::csv_cell).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<ExperimentReport> {
        serde_json::from_str(text).map_err(|e| LayersError::Parse(e.to_string()))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn emit(report: &ExperimentReport, path: &Path, format: Format) -> Result<()> {
    std::fs::write(path, report.render(format)).map_err(|e| LayersError::IoFailure(format!("{}: {e}", path.display())))
}

/// Graph source named by a generator spec:
/// `star:M`, `path:N`, `cycle:N`, `complete:N`, `regular:D:N`,
/// `degrees:SPEC:N` (SPEC as in [`SequenceSpec::parse`]), `er:C:N`
/// (`G(N, C/N)`), `tree:PROFILE:DEPTH`, `file:PATH` (edge list).
#[derive(Debug, Clone, PartialEq)]
pub enum GraphGenerator {
    Fixed(Graph),
    Sequence(SequenceSpec, usize),
    ErdosRenyi(f64, usize),
    Tree(DegreeProfile, usize),
}

impl GraphGenerator {
    pub fn parse(spec: &str) -> Result<GraphGenerator> {
        let spec = spec.trim();
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let last_num = |s: &str| -> Result<(String, usize)> {
            let (head, n) = s.rsplit_once(':').ok_or_else(|| LayersError::Parse(format!("generator '{spec}' needs :N")))?;
            Ok((head.to_string(), parse_size(n)?))
        };
        Ok(match kind {
            "star" => GraphGenerator::Fixed(Graph::star(parse_size(rest)?)),
            "path" => GraphGenerator::Fixed(Graph::path(parse_size(rest)?)),
            "cycle" => GraphGenerator::Fixed(Graph::cycle(parse_size(rest)?)),
            "complete" => GraphGenerator::Fixed(Graph::complete(parse_size(rest)?)),
            "regular" => {
                let (d, n) = last_num(rest)?;
                GraphGenerator::Sequence(SequenceSpec::Regular(parse_size(&d)?), n)
            }
            "degrees" => {
                let (s, n) = last_num(rest)?;
                GraphGenerator::Sequence(SequenceSpec::parse(&s)?, n)
            }
            "er" => {
                let (c, n) = last_num(rest)?;
                let c: f64 = c.parse().map_err(|_| LayersError::Parse(format!("bad c in '{spec}'")))?;
                GraphGenerator::ErdosRenyi(c, n)
            }
            "tree" => {
                let (p, depth) = last_num(rest)?;
                GraphGenerator::Tree(DegreeProfile::parse(&p)?, depth)
            }
            "file" => GraphGenerator::Fixed(Graph::parse_edge_list(&std::fs::read_to_string(rest)?)?),
            _ => return Err(LayersError::InvalidConfig(format!("unknown generator '{spec}'"))),
        })
    }

    pub fn is_fixed(&self) -> bool {
        match self {
            GraphGenerator::Fixed(_) => true,
            GraphGenerator::Tree(p, _) => !matches!(p, DegreeProfile::RandomChoice(_)),
            _ => false,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match self {
            GraphGenerator::Fixed(g) => Ok(g.clone()),
            GraphGenerator::Sequence(spec, n) => {
                let seq = spec.sample(*n, rng)?;
                simple_graph_from_sequence(&seq, rng, SIMPLE_ATTEMPTS)
            }
            GraphGenerator::ErdosRenyi(c, n) => Ok(erdos_renyi(*n, (c / (*n).max(1) as f64).min(1.0), rng)),
            GraphGenerator::Tree(p, depth) => Ok(generate_profile_tree(p, *depth, rng)?.graph),
        }
    }
}

/// Parameter access that records every value used, defaults included, for
/// the config echo.
struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    used: BTreeMap<String, String>,
}

impl<'a> Ctx<'a> {
    fn raw(&mut self, key: &str, default: &str) -> String {
        let v = match key {
            "generator" => self.cfg.generator.clone(),
            "k" => self.cfg.k.map(|k| k.to_string()),
            "sizes" if !self.cfg.sizes.is_empty() => {
                Some(self.cfg.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
            }
            _ => self.cfg.params.get(key).cloned(),
        }
        .unwrap_or_else(|| default.to_string());
        self.used.insert(key.to_string(), v.clone());
        v
    }

    fn num<T: FromStr>(&mut self, key: &str, default: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.raw(key, default);
        v.trim().parse().map_err(|e| LayersError::InvalidConfig(format!("{key} = '{v}': {e}")))
    }

    fn size(&mut self, key: &str, default: &str) -> Result<usize> {
        parse_size(&self.raw(key, default))
    }

    fn sizes(&mut self, key: &str, default: &str) -> Result<Vec<usize>> {
        parse_list(&self.raw(key, default), parse_size)
    }

    fn floats(&mut self, key: &str, default: &str) -> Result<Vec<f64>> {
        let v = self.raw(key, default);
        parse_list(&v, |s| s.parse::<f64>().map_err(|e| LayersError::InvalidConfig(format!("{key}: '{s}': {e}"))))
    }

    fn trials(&self) -> usize {
        self.cfg.trials
    }

    fn seed(&self) -> u64 {
        self.cfg.seed
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
    violations: usize,
}

impl Table {
    fn new(columns: &[&'static str]) -> Table {
        Table { columns: columns.to_vec(), rows: Vec::new(), violations: 0 }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut ctx = Ctx { cfg, used: BTreeMap::new() };
    let table = match cfg.experiment.as_str() {
        "layer-marginal" => layer_marginal(&mut ctx)?,
        "sample" => sample(&mut ctx)?,
        "tk-largest" => tk_largest(&mut ctx)?,
        "tree-good" => tree_good(&mut ctx)?,
        "t2-scan" => t2_scan(&mut ctx)?,
        "t2-ivn" => t2_ivn(&mut ctx)?,
        "t2-sums" => t2_sums(&mut ctx)?,
        "lattice-eit" => lattice_eit(&mut ctx)?,
        "lattice-pairs" => lattice_pairs(&mut ctx)?,
        "lattice-a" => lattice_a(&mut ctx)?,
        "lattice-cross" => lattice_cross(&mut ctx)?,
        "lattice-chain" => lattice_chain(&mut ctx)?,
        "randgraph-t3" => randgraph_t3(&mut ctx)?,
        "er-scan" => er_scan(&mut ctx)?,
        "cycles" => cycles(&mut ctx)?,
        "nice" => nice(&mut ctx)?,
        "growth" => growth(&mut ctx)?,
        "verify" => verify(&mut ctx)?,
        other => return Err(LayersError::UnknownExperiment(other.to_string())),
    };
    let mut config = cfg.echo();
    config.extend(ctx.used);
    Ok(ExperimentReport {
        experiment: cfg.experiment.clone(),
        config,
        columns: table.columns.iter().map(|s| s.to_string()).collect(),
        rows: table.rows,
        violations: table.violations,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn fixed_graph(ctx: &mut Ctx, default: &str) -> Result<Graph> {
    let g = GraphGenerator::parse(&ctx.raw("generator", default))?;
    if !g.is_fixed() {
        return Err(LayersError::InvalidConfig("this experiment needs a deterministic generator".into()));
    }
    g.sample(&mut trial_rng(0, "fixed", 0))
}

/// Distribution of the layer of one vertex; each layer `1..=deg+1` has
/// probability `1/(deg+1)`.
fn layer_marginal(ctx: &mut Ctx) -> Result<Table> {
    let g = fixed_graph(ctx, "star:4")?;
    let v: usize = ctx.num("vertex", "0")?;
    if v >= g.n() {
        return Err(LayersError::InvalidConfig(format!("vertex {v} not in graph")));
    }
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let layers = par_trials(trials, |t| {
        let mut rng = trial_rng(seed, "layer-marginal", t);
        let ages = sample_ages(&g, &mut rng);
        compute_layers(&g, &ages).expect("sizes match").layer[v]
    });
    let m = g.degree(v);
    let mut tab = Table::new(&["layer", "count", "trials", "estimate", "stderr", "expected"]);
    for i in 1..=m as u32 + 1 {
        let c = layers.iter().filter(|&&l| l == i).count();
        let p = c as f64 / trials as f64;
        tab.push(vec![
            Value::int(i),
            Value::int(c),
            Value::int(trials),
            Value::float(p),
            Value::float(binomial_stderr(p, trials)),
            Value::float(1.0 / (m as f64 + 1.0)),
        ]);
    }
    Ok(tab)
}

fn sample(ctx: &mut Ctx) -> Result<Table> {
    let gen = GraphGenerator::parse(&ctx.raw("generator", "cycle:10"))?;
    let mut rng = trial_rng(ctx.seed(), "sample", 0);
    let g = gen.sample(&mut rng)?;
    let ages = sample_ages(&g, &mut rng);
    let layers = compute_layers(&g, &ages)?;
    let mut tab = Table::new(&["vertex", "age_rank", "layer"]);
    for line in sample_csv(&ages, &layers).lines().skip(1) {
        tab.push(line.split(',').map(|c| Value::Int(c.parse().expect("integer cell"))).collect());
    }
    Ok(tab)
}

fn tk_largest(ctx: &mut Ctx) -> Result<Table> {
    let gen = GraphGenerator::parse(&ctx.raw("generator", "regular:3:1000"))?;
    let k: u32 = ctx.num("k", "3")?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let xs = par_trials(trials, |t| -> Result<f64> {
        let mut rng = trial_rng(seed, "tk-largest", t);
        let g = gen.sample(&mut rng)?;
        Ok(largest_tk_fraction(&g, k, &mut rng))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (mean, se) = mean_stderr(&xs);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let mut tab = Table::new(&["k", "trials", "mean_fraction", "stderr", "min_fraction"]);
    tab.push(vec![Value::int(k), Value::int(trials), Value::float(mean), Value::float(se), Value::float(min)]);
    Ok(tab)
}

fn tree_good(ctx: &mut Ctx) -> Result<Table> {
    let profile = DegreeProfile::parse(&ctx.raw("profile", "3"))?;
    let ks = ctx.sizes("ks", "2,3,4,5")?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let mut tab = Table::new(&["k", "trials", "mean_z", "stderr_z", "p_good", "stderr_good"]);
    for k in ks {
        let tag = format!("tree-good/{k}");
        let fixed = match profile {
            DegreeProfile::RandomChoice(_) => None,
            _ => Some(generate_profile_tree(&profile, 2 * k, &mut trial_rng(seed, &tag, u64::MAX))?),
        };
        if let Some(t) = &fixed {
            ZkEvaluator::new(t, k)?;
        }
        let zs = par_trials(trials, |t| -> Result<f64> {
            let mut rng = trial_rng(seed, &tag, t);
            let own;
            let tree = match &fixed {
                Some(tr) => tr,
                None => {
                    own = generate_profile_tree(&profile, 2 * k, &mut rng)?;
                    &own
                }
            };
            let ages = sample_ages(&tree.graph, &mut rng);
            Ok(ZkEvaluator::new(tree, k)?.zk(&ages))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let (mz, sz) = mean_stderr(&zs);
        let good: Vec<f64> = zs.iter().map(|&z| f64::from(u8::from(is_k_good(z)))).collect();
        let (pg, sg) = mean_stderr(&good);
        tab.push(vec![Value::int(k), Value::int(trials), Value::float(mz), Value::float(sz), Value::float(pg), Value::float(sg)]);
    }
    Ok(tab)
}

pub const DEFAULT_T2_GENERATORS: &str =
    "cycle:30;regular:3:200;degrees:random:3,4,5:200;er:2:200;er:6:100;tree:3:6;tree:random:1,2,3,4:6;complete:6;star:5;path:20";

fn t2_scan(ctx: &mut Ctx) -> Result<Table> {
    let gens = ctx.raw("generators", DEFAULT_T2_GENERATORS);
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let mut tab = Table::new(&["generator", "trials", "forest_violations", "monotone_violations", "mean_t2_fraction"]);
    for spec in gens.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let gen = GraphGenerator::parse(spec)?;
        let tag = format!("t2-scan/{spec}");
        let outcomes = par_trials(trials, |t| -> Result<(bool, bool, f64)> {
            let mut rng = trial_rng(seed, &tag, t);
            let g = gen.sample(&mut rng)?;
            let ages = sample_ages(&g, &mut rng);
            let s = analyze_t2(&g, &ages)?;
            let frac = s.open.iter().filter(|&&o| o).count() as f64 / g.n().max(1) as f64;
            Ok((s.forest, s.monotone, frac))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let fv = outcomes.iter().filter(|o| !o.0).count();
        let mv = outcomes.iter().filter(|o| !o.1).count();
        let fracs: Vec<f64> = outcomes.iter().map(|o| o.2).collect();
        tab.violations += fv + mv;
        tab.push(vec![
            Value::text(spec),
            Value::int(trials),
            Value::int(fv),
            Value::int(mv),
            Value::float(mean_stderr(&fracs).0),
        ]);
    }
    Ok(tab)
}

fn t2_ivn(ctx: &mut Ctx) -> Result<Table> {
    let gen_spec = ctx.raw("generator", "tree:3:9");
    let gen = GraphGenerator::parse(&gen_spec)?;
    let v: usize = ctx.num("vertex", "0")?;
    let ns = ctx.sizes("ns", "3,4,5,6,7")?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let fixed = if gen.is_fixed() { Some(gen.sample(&mut trial_rng(seed, "t2-ivn/graph", 0))?) } else { None };
    let mut tab = Table::new(&["n", "trials", "estimate", "stderr", "bound", "within_3sigma"]);
    for n in ns {
        let tag = format!("t2-ivn/{n}");
        let hits = par_trials(trials, |t| -> Result<(bool, usize)> {
            let mut rng = trial_rng(seed, &tag, t);
            let own;
            let g = match &fixed {
                Some(g) => g,
                None => {
                    own = gen.sample(&mut rng)?;
                    &own
                }
            };
            let ages = sample_ages(g, &mut rng);
            let layers = compute_layers(g, &ages)?;
            Ok((i_vn_event(g, v, n, &ages, &layers.layer), g.max_degree()))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let delta = hits.iter().map(|h| h.1).max().unwrap_or(0);
        let p = hits.iter().filter(|h| h.0).count() as f64 / trials as f64;
        let se = binomial_stderr(p, trials);
        let bound = i_vn_bound(delta, n);
        let ok = p <= bound + 3.0 * se;
        if !ok {
            tab.violations += 1;
        }
        tab.push(vec![
            Value::int(n),
            Value::int(trials),
            Value::float(p),
            Value::float(se),
            Value::float(bound),
            Value::int(u8::from(ok)),
        ]);
    }
    Ok(tab)
}

fn t2_sums(ctx: &mut Ctx) -> Result<Table> {
    let g = fixed_graph(ctx, "tree:3:8")?;
    let v: usize = ctx.num("vertex", "0")?;
    let n_max = ctx.size("n_max", "6")?;
    let check = weighted_sum_recurrence_check(&g, v, n_max)?;
    if !check.non_increasing {
        return Ok(Table { violations: 1, ..sums_table(&check.sums) });
    }
    Ok(sums_table(&check.sums))
}

fn sums_table(sums: &[crate::oracle::Rational]) -> Table {
    let mut tab = Table::new(&["n", "s_n", "s_n_float"]);
    for (i, s) in sums.iter().enumerate() {
        tab.push(vec![Value::int(i + 1), Value::text(s.to_string()), Value::float(rat_to_f64(s))]);
    }
    tab
}

fn lattice_eit(ctx: &mut Ctx) -> Result<Table> {
    let ds = ctx.sizes("d", "2,5,10")?;
    let horizon = ctx.size("horizon", "64")?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let mut tab = Table::new(&["d", "statistic", "estimate", "stderr", "reference"]);
    for d in ds {
        if d < 2 || horizon == 0 {
            return Err(LayersError::InvalidConfig("lattice-eit needs d >= 2 and horizon >= 1".into()));
        }
        let tag = format!("lattice-eit/{d}");
        let stats = par_trials(trials, |t| sample_walk_pair(d, horizon, &mut trial_rng(seed, &tag, t)));
        let df = d as f64;
        let freq = |f: &dyn Fn(Option<usize>) -> bool| stats.iter().filter(|s| f(s.tau)).count() as f64 / trials as f64;
        let rows: [(&str, f64, Option<f64>); 4] = [
            ("p_tau_1", freq(&|t| t == Some(1)), Some(1.0 / df)),
            ("p_tau_2", freq(&|t| t == Some(2)), Some(df.powi(-2) - df.powi(-3))),
            ("p_tau_3", freq(&|t| t == Some(3)), Some(3.0 * df.powi(-3))),
            ("p_censored", freq(&|t| t.is_none()), None),
        ];
        for (name, p, r) in rows {
            tab.push(vec![
                Value::int(d),
                Value::text(name),
                Value::float(p),
                Value::float(binomial_stderr(p, trials)),
                r.map_or(Value::text(""), Value::float),
            ]);
        }
        let inter: Vec<usize> = stats.iter().map(|s| s.intersections).collect();
        let tail = tail_from_intersections(&inter, 30);
        for (i, &p) in tail.tail.iter().enumerate().take(10) {
            tab.push(vec![
                Value::int(d),
                Value::text(format!("tail_{}", i + 1)),
                Value::float(p),
                Value::float(binomial_stderr(p, trials)),
                Value::text(""),
            ]);
        }
        tab.push(vec![
            Value::int(d),
            Value::text("alpha_hat"),
            tail.alpha_hat.map_or(Value::text(""), Value::float),
            Value::text(""),
            Value::float(1.0 / df + 1.0 / (df * df)),
        ]);
    }
    Ok(tab)
}

fn lattice_pairs(ctx: &mut Ctx) -> Result<Table> {
    let ds = ctx.sizes("d", "20")?;
    let horizon = ctx.size("horizon", &DEFAULT_PAIR_HORIZON.to_string())?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let mut tab = Table::new(&["d", "statistic", "estimate", "stderr", "scaled", "reference_scaled"]);
    for d in ds {
        if d < 5 {
            return Err(LayersError::InvalidConfig("lattice-pairs needs d >= 5".into()));
        }
        let d2 = (d * d) as f64;
        let mut est = HashMap::new();
        for s in PairStart::ALL {
            let tag = format!("lattice-pairs/{d}/{}", s.name());
            let hits = par_trials(trials, |t| pair_hits(s, d, horizon, &mut trial_rng(seed, &tag, t)))
                .into_iter()
                .filter(|&h| h)
                .count();
            let p = hits as f64 / trials as f64;
            est.insert(s, p);
            let se = binomial_stderr(p, trials);
            tab.push(vec![
                Value::int(d),
                Value::text(s.name()),
                Value::float(p),
                Value::float(se),
                Value::float(p * d2),
                Value::float(s.leading()),
            ]);
        }
        let p12 = est[&PairStart::P12];
        for (name, s, r) in [("p123/p12", PairStart::P123, 2.0), ("p1234/p12", PairStart::P1234, 4.0)] {
            let ratio = est[&s] / p12;
            // delta method, independent estimates
            let rel = (binomial_stderr(est[&s], trials) / est[&s]).hypot(binomial_stderr(p12, trials) / p12);
            tab.push(vec![
                Value::int(d),
                Value::text(name),
                Value::float(ratio),
                Value::float(ratio * rel),
                Value::text(""),
                Value::float(r),
            ]);
        }
    }
    Ok(tab)
}

/// Monotone path from the origin with `2·blocks` vertices, stepping through
/// the coordinate directions in turn.
pub fn staircase_path(d: usize, blocks: usize) -> Vec<LatticePoint> {
    let mut p = vec![LatticePoint::origin(d)];
    for i in 0..2 * blocks - 1 {
        p.push(p[i].shifted(i % d, 1));
    }
    p
}

fn lattice_a(ctx: &mut Ctx) -> Result<Table> {
    let d = ctx.size("d", "2")?;
    let blocks = ctx.size("blocks", "1")?;
    if d < 2 || blocks == 0 {
        return Err(LayersError::InvalidConfig("lattice-a needs d >= 2 and blocks >= 1".into()));
    }
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let path = staircase_path(d, blocks);
    let outs = par_trials(trials, |t| -> Result<(Vec<bool>, bool, bool)> {
        let src = LazyAgeSource::new(trial_rng(seed, "lattice-a", t).random());
        let o = check_lattice_a(&path, &src)?;
        let mut in_t4 = true;
        for p in &path {
            in_t4 &= lattice_layer(&src, p)? <= 4;
        }
        Ok((o.blocks, o.all, in_t4))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let model = LatticeEventModel::new(path.clone()).ok().filter(|m| m.oracle.core <= 8);
    let mut tab = Table::new(&["statistic", "trials", "estimate", "stderr", "exact", "displayed"]);
    let mut push = |name: String, hits: usize, exact: Option<f64>, disp: Option<f64>| {
        let p = hits as f64 / trials as f64;
        tab.push(vec![
            Value::text(name),
            Value::int(trials),
            Value::float(p),
            Value::float(binomial_stderr(p, trials)),
            exact.map_or(Value::text(""), Value::float),
            disp.map_or(Value::text(""), Value::float),
        ]);
    };
    let disp = rat_to_f64(&lattice_marginal_ai(d));
    for b in 0..blocks {
        let exact = match &model {
            Some(m) => Some(rat_to_f64(&m.prob_blocks(&[b])?)),
            None => Some(rat_to_f64(&lattice_marginal_exact(d))),
        };
        push(format!("A_{}", b + 1), outs.iter().filter(|o| o.0[b]).count(), exact, Some(disp));
    }
    let exact_all = match &model {
        Some(m) => Some(rat_to_f64(&m.prob_all()?)),
        None => None,
    };
    push("A".into(), outs.iter().filter(|o| o.1).count(), exact_all, Some(disp.powi(blocks as i32)));
    let bad = outs.iter().filter(|o| o.1 && !o.2).count();
    tab.violations += bad;
    Ok(tab)
}

fn lattice_cross(ctx: &mut Ctx) -> Result<Table> {
    let ds = ctx.sizes("d", "10,15,20")?;
    let k = ctx.size("k", "4")?;
    let radius = ctx.size("radius", "30")?;
    let budget = ctx.size("budget", &DEFAULT_NODE_BUDGET.to_string())?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let mut tab = Table::new(&[
        "d",
        "seeds",
        "origin_open",
        "crossed",
        "exhausted",
        "frequency",
        "stderr",
        "conditional_frequency",
        "mean_explored",
    ]);
    for d in ds {
        let tag = format!("lattice-cross/{d}");
        let res = par_trials(trials, |t| -> Result<Option<crate::lattice::CrossingResult>> {
            let src = LazyAgeSource::new(trial_rng(seed, &tag, t).random());
            match search_open_monotone_path(d, k, radius, &src, budget) {
                Ok(r) => Ok(Some(r)),
                Err(LayersError::BudgetExhausted(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let done: Vec<_> = res.iter().flatten().collect();
        let exhausted = res.len() - done.len();
        let open = done.iter().filter(|r| r.longest.is_some()).count() + exhausted;
        let crossed = done.iter().filter(|r| r.crossed).count();
        let freq = crossed as f64 / trials as f64;
        let explored: Vec<f64> = done.iter().map(|r| r.explored as f64).collect();
        tab.push(vec![
            Value::int(d),
            Value::int(trials),
            Value::int(open),
            Value::int(crossed),
            Value::int(exhausted),
            Value::float(freq),
            Value::float(binomial_stderr(freq, trials)),
            Value::float(if open > 0 { crossed as f64 / open as f64 } else { 0.0 }),
            Value::float(mean_stderr(&explored).0),
        ]);
    }
    Ok(tab)
}

fn lattice_chain(ctx: &mut Ctx) -> Result<Table> {
    let d = ctx.size("d", "20")?;
    let q42 = match ctx.raw("q42", "default").as_str() {
        "default" => None,
        s => Some(s.parse::<f64>().map_err(|e| LayersError::InvalidConfig(format!("q42: {e}")))?),
    };
    let a_prime: f64 = ctx.num("a_prime", &default_a_prime(d).to_string())?;
    let trunc = ctx.size("truncate", "10")?;
    let params = ChainParams::new(d, q42)?;
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let samples = par_trials(trials, |t| params.sample(&mut trial_rng(seed, "lattice-chain", t)));
    let mut counts = HashMap::new();
    for s in samples {
        *counts.entry(s).or_insert(0usize) += 1;
    }
    let mut tab = Table::new(&["statistic", "value"]);
    let disp_mass = 1.0 / (1.0 - params.q20);
    for (name, v) in [
        ("q20", params.q20),
        ("q42", params.q42),
        ("tv_displayed", chain_tv(&counts, trials, |a, b| params.law_displayed(a, b), trunc)),
        ("tv_exact", chain_tv(&counts, trials, |a, b| params.law_exact(a, b), trunc)),
        ("displayed_total_mass", disp_mass),
        ("a_prime", a_prime),
    ] {
        tab.push(vec![Value::text(name), Value::float(v)]);
    }
    match chain_weighted_moment(&params, a_prime) {
        Ok(m) => {
            for (name, v) in [("p0", m.p0), ("p2", m.p2), ("moment_displayed", m.displayed), ("moment_exact", m.exact)] {
                tab.push(vec![Value::text(name), Value::float(v)]);
            }
        }
        Err(LayersError::DivergentSeries(why)) => tab.push(vec![Value::text("moment"), Value::text(format!("divergent: {why}"))]),
        Err(e) => return Err(e),
    }
    Ok(tab)
}

fn randgraph_t3(ctx: &mut Ctx) -> Result<Table> {
    let spec = SequenceSpec::parse(&ctx.raw("degrees", "3"))?;
    let sizes = ctx.sizes("sizes", "1000,10000,100000")?;
    let rows = t3_giant_experiment(&spec, &sizes, ctx.trials(), ctx.seed())?;
    let mut tab = Table::new(&["n", "trials", "mean_fraction", "stderr", "min_fraction", "relative_change"]);
    let mut prev: Option<f64> = None;
    for r in rows {
        let change = prev.map(|p| (r.mean - p).abs() / p);
        tab.push(vec![
            Value::int(r.n),
            Value::int(r.trials),
            Value::float(r.mean),
            Value::float(r.stderr),
            Value::float(r.min),
            change.map_or(Value::text(""), Value::float),
        ]);
        prev = Some(r.mean);
    }
    Ok(tab)
}

fn er_scan(ctx: &mut Ctx) -> Result<Table> {
    let cs = ctx.floats("c", "0.5,1,2,3,4,6,8,12,20")?;
    let n = ctx.size("n", "2000")?;
    let mut tab = Table::new(&["c", "n", "mean_fraction", "stderr"]);
    for r in er_t3_phase_scan(&cs, n, ctx.trials(), ctx.seed()) {
        tab.push(vec![Value::float(r.c), Value::int(n), Value::float(r.mean), Value::float(r.stderr)]);
    }
    Ok(tab)
}

fn cycles(ctx: &mut Ctx) -> Result<Table> {
    let spec = SequenceSpec::parse(&ctx.raw("degrees", "3"))?;
    let n = ctx.size("n", "10000")?;
    let k_max = ctx.size("k_max", "4")?;
    let rows = configuration_cycle_means(&spec, n, ctx.trials(), k_max, ctx.seed())?;
    let mut tab = Table::new(&["i", "mean", "stderr", "poisson_mean"]);
    for r in rows {
        tab.push(vec![Value::int(r.i), Value::float(r.mean), Value::float(r.stderr), Value::float(r.poisson)]);
    }
    Ok(tab)
}

fn nice(ctx: &mut Ctx) -> Result<Table> {
    let profile = DegreeProfile::parse(&ctx.raw("profile", "3"))?;
    let k = ctx.size("k", "15")?;
    let tree = crate::graph::generate_spherically_symmetric_tree(&profile, k + 1)?;
    let marked = crate::graph::distant_independent_set(&tree.graph, 15, 0);
    let cfg = NiceConfig { marked, k };
    let (trials, seed) = (ctx.trials(), ctx.seed());
    let ws = par_trials(trials, |t| -> Result<f64> {
        let ages = sample_ages(&tree.graph, &mut trial_rng(seed, "nice", t));
        Ok(nice_w_size(&tree, &ages, &cfg)? as f64)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (m, se) = mean_stderr(&ws);
    let nonempty = ws.iter().filter(|&&w| w > 0.0).count() as f64 / trials as f64;
    let mut tab = Table::new(&["k", "marked", "trials", "mean_w", "stderr_w", "p_nonempty"]);
    tab.push(vec![
        Value::int(k),
        Value::int(cfg.marked.len()),
        Value::int(trials),
        Value::float(m),
        Value::float(se),
        Value::float(nonempty),
    ]);
    Ok(tab)
}

fn growth(ctx: &mut Ctx) -> Result<Table> {
    let profile = DegreeProfile::parse(&ctx.raw("profile", "counterexample"))?;
    let max_level = ctx.size("max_level", "70000")?;
    let c: f64 = ctx.num("c", "1e9")?;
    let a: f64 = ctx.num("a", "1.33")?;
    let r = growth_condition_profile(&profile, max_level, c, a)?;
    let mut tab = Table::new(&["max_level", "c", "a", "holds", "witness_level"]);
    tab.push(vec![
        Value::int(max_level),
        Value::float(c),
        Value::float(a),
        Value::int(u8::from(r.holds)),
        r.witness.map_or(Value::text(""), Value::int),
    ]);
    Ok(tab)
}

fn verify(_ctx: &mut Ctx) -> Result<Table> {
    let rows = crate::verify::oracle_suite()?;
    let mut tab = Table::new(&["group", "case", "formula", "oracle", "status"]);
    for r in rows {
        if r.status == crate::verify::Status::Mismatch {
            tab.violations += 1;
        }
        tab.push(vec![
            Value::text(r.group),
            Value::text(r.case),
            Value::text(r.formula.to_string()),
            Value::text(r.oracle.to_string()),
            Value::text(r.status.as_str()),
        ]);
    }
    Ok(tab)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parse_and_override() {
        let mut c = ExperimentConfig::parse("experiment = sample\n# note\ntrials = 1e3\nsizes = 10, 1e2\nfoo = bar\n").unwrap();
        assert_eq!(c.trials, 1000);
        assert_eq!(c.sizes, vec![10, 100]);
        assert_eq!(c.params["foo"], "bar");
        c.apply_overrides(&["seed=5"]).unwrap();
        assert_eq!(c.seed, 5);
        assert!(ExperimentConfig::parse("nonsense").is_err());
    }

    #[test]
    fn unknown_and_zero_trials() {
        assert!(matches!(run(&ExperimentConfig::new("nope")), Err(LayersError::UnknownExperiment(_))));
        let mut c = ExperimentConfig::new("sample");
        c.trials = 0;
        assert!(matches!(run(&c), Err(LayersError::InvalidConfig(_))));
    }

    #[test]
    fn header_only_csv() {
        let r = ExperimentReport {
            experiment: "x".into(),
            config: BTreeMap::new(),
            columns: vec!["a".into(), "b".into()],
            rows: vec![],
            violations: 0,
            wall_clock_secs: 0.0,
        };
        assert_eq!(r.to_csv(), "# violations = 0\na,b\n");
    }

    #[test]
    fn generator_specs() {
        assert!(matches!(GraphGenerator::parse("star:4").unwrap(), GraphGenerator::Fixed(ref g) if g.n() == 5));
        assert!(matches!(GraphGenerator::parse("degrees:random:3,4,5:100").unwrap(), GraphGenerator::Sequence(_, 100)));
        assert!(matches!(GraphGenerator::parse("er:2.5:1e3").unwrap(), GraphGenerator::ErdosRenyi(c, 1000) if c == 2.5));
        assert!(GraphGenerator::parse("tree:3,4:5").unwrap().is_fixed());
        assert!(GraphGenerator::parse("blob:1").is_err());
    }

    #[test]
    fn staircase_is_monotone() {
        let p = staircase_path(3, 3);
        assert_eq!(p.len(), 6);
        assert!(crate::lattice::check_monotone(&p));
    }
}
