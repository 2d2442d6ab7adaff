use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use layers_core::experiment::{self, ExperimentConfig, ExperimentReport, Format};
use layers_core::graph::LatticePoint;
use layers_core::layers::{lattice_layer, LazyAgeSource};
use layers_core::LayersError;

#[derive(Parser)]
#[command(name = "layers", version, about = "Layers-model experiments and exact checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Defaults to the output extension, else csv.
    #[arg(long, value_enum)]
    format: Option<Fmt>,
    /// Extra `key=value` settings, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// One age draw on a generated graph: vertex, age rank, layer.
    Sample {
        #[arg(long, default_value = "cycle:10")]
        generator: String,
        #[command(flatten)]
        common: Common,
    },
    /// E[Z_k] and P(k-good) on a rooted tree.
    TreeGood {
        #[arg(long, default_value = "3")]
        profile: String,
        #[arg(long, default_value = "2,3,4,5")]
        ks: String,
        #[command(flatten)]
        common: Common,
    },
    /// Forest and monotonicity of T_2 across generators.
    T2Scan {
        /// `;`-separated generator specs.
        #[arg(long)]
        generators: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Meeting times and intersection tails of monotone walk pairs.
    LatticeEit {
        #[arg(long, default_value = "2,5,10")]
        d: String,
        #[arg(long, default_value = "64")]
        horizon: String,
        #[command(flatten)]
        common: Common,
    },
    /// Open monotone paths in T_k(Z^d) from the origin.
    LatticeCross {
        #[arg(long, default_value = "10,15,20")]
        d: String,
        #[arg(long, default_value = "4")]
        k: String,
        #[arg(long, default_value = "30")]
        radius: String,
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long)]
        budget: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Layer of one lattice point under lazy ages.
    LatticeQuery {
        #[arg(long)]
        seed: u64,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Largest T_3 component of random graphs with a degree spec.
    RandgraphT3 {
        #[arg(long, default_value = "3")]
        degrees: String,
        #[arg(long, default_value = "1e3,1e4,1e5")]
        sizes: String,
        #[command(flatten)]
        common: Common,
    },
    /// Largest T_3 component of G(n, c/n) over a grid of c.
    ErScan {
        #[arg(long, default_value = "0.5,1,2,3,4,6,8,12,20")]
        c: String,
        #[arg(long, default_value = "2000")]
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Exact-oracle suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Any experiment from a key = value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn build(name: &str, pairs: &[(&str, &str)], common: &Common, base: Option<ExperimentConfig>) -> Result<ExperimentConfig, LayersError> {
    let mut cfg = base.unwrap_or_else(|| ExperimentConfig::new(name));
    for (k, v) in pairs {
        cfg.set(k, v)?;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = &common.trials {
        cfg.set("trials", t)?;
    }
    cfg.apply_overrides(&common.set)?;
    Ok(cfg)
}

fn deliver(report: &ExperimentReport, common: &Common, cfg: &ExperimentConfig) -> Result<(), LayersError> {
    let path = common.output.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    let format = match (common.format, &path) {
        (Some(Fmt::Csv), _) => Format::Csv,
        (Some(Fmt::Json), _) => Format::Json,
        (None, Some(p)) => Format::from_path(p),
        (None, None) => Format::Csv,
    };
    match path {
        Some(p) => experiment::emit(report, &p, format),
        None => {
            print!("{}", report.render(format));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<usize, LayersError> {
        let (cfg, common) = match &cli.cmd {
            Cmd::LatticeQuery { seed, point, k } => {
                let coords = point
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|e| LayersError::Parse(format!("'{c}': {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let layer = lattice_layer(&LazyAgeSource::new(*seed), &LatticePoint(coords))?;
                match k {
                    Some(k) => println!("layer = {layer}\nin_T{k} = {}", layer <= *k),
                    None => println!("layer = {layer}"),
                }
                return Ok(0);
            }
            Cmd::Sample { generator, common } => (build("sample", &[("generator", generator)], common, None)?, common),
            Cmd::TreeGood { profile, ks, common } => {
                (build("tree-good", &[("profile", profile), ("ks", ks)], common, None)?, common)
            }
            Cmd::T2Scan { generators, common } => {
                let mut p = vec![];
                if let Some(g) = generators {
                    p.push(("generators", g.as_str()));
                }
                (build("t2-scan", &p, common, None)?, common)
            }
            Cmd::LatticeEit { d, horizon, common } => {
                (build("lattice-eit", &[("d", d), ("horizon", horizon)], common, None)?, common)
            }
            Cmd::LatticeCross { d, k, radius, seeds, budget, common } => {
                let mut p = vec![("d", d.as_str()), ("k", k.as_str()), ("radius", radius.as_str())];
                if let Some(s) = seeds {
                    p.push(("trials", s));
                }
                if let Some(b) = budget {
                    p.push(("budget", b));
                }
                (build("lattice-cross", &p, common, None)?, common)
            }
            Cmd::RandgraphT3 { degrees, sizes, common } => {
                (build("randgraph-t3", &[("degrees", degrees), ("sizes", sizes)], common, None)?, common)
            }
            Cmd::ErScan { c, n, common } => (build("er-scan", &[("c", c), ("n", n)], common, None)?, common),
            Cmd::Verify { common } => (build("verify", &[("trials", "1")], common, None)?, common),
            Cmd::Run { config, common } => {
                let base = ExperimentConfig::from_file(config)?;
                (build("", &[], common, Some(base))?, common)
            }
        };
        let report = experiment::run(&cfg)?;
        deliver(&report, common, &cfg)?;
        Ok(report.violations)
    })();
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(v) => {
            eprintln!("{v} invariant violation(s)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
