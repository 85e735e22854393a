//! specpart: multi-way spectral partitioning from the command line.
//!
//! Ingests a graph (edge list or Matrix Market) or generates a named family,
//! runs one of the partitioning pipelines, and emits a JSON report. Exit
//! codes: 0 success, 2 validation error, 3 pipeline failure.

mod report;

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, ValueEnum};

use specpart::generators::FamilySpec;
use specpart::geometry::Metric;
use specpart::graph::WeightedGraph;
use specpart::pipeline::{
    disjoint_support_functions, disjoint_support_functions_reduced, k_sparse_cuts,
    k_way_partition, PipelineConfig, PipelineError,
};

use report::{CliError, ErrorKind, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Disjointly supported functions with small Rayleigh quotients.
    Functions,
    /// Disjoint sparse cuts via ball carving and threshold sweeps.
    Cuts,
    /// A full k-way partition with per-set expansions.
    Partition,
}

impl Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Algorithm::Functions => "functions",
            Algorithm::Cuts => "cuts",
            Algorithm::Partition => "partition",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Radial,
    InducedPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(
    name = "specpart",
    about = "Multi-way spectral graph partitioning",
    version
)]
struct Args {
    /// Input graph file (edge list `u v [w]` or Matrix Market). Exactly one
    /// of --input / --family must be given.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Generate a graph family instead of reading a file:
    /// path | cycle | grid | complete | clique-union | planted-partition |
    /// gnp | noisy-hypercube.
    #[arg(long)]
    family: Option<String>,

    /// Vertex count for path/cycle/complete/gnp.
    #[arg(long)]
    n: Option<usize>,
    /// Grid rows.
    #[arg(long)]
    rows: Option<usize>,
    /// Grid columns.
    #[arg(long)]
    cols: Option<usize>,
    /// Cluster count for clique-union / planted-partition.
    #[arg(long)]
    clusters: Option<usize>,
    /// Cluster size for clique-union / planted-partition.
    #[arg(long)]
    size: Option<usize>,
    /// Bridge edge weight for clique-union.
    #[arg(long)]
    bridge: Option<f64>,
    /// In-cluster edge probability for planted-partition.
    #[arg(long)]
    p_in: Option<f64>,
    /// Cross-cluster edge probability for planted-partition.
    #[arg(long)]
    p_out: Option<f64>,
    /// Edge probability for gnp.
    #[arg(long)]
    p: Option<f64>,
    /// Hypercube dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Hypercube noise: a number in (0, 1), or `auto` for ln 2 / ln(dim).
    #[arg(long)]
    eps: Option<String>,
    /// Seed for randomized generators (defaults to --seed).
    #[arg(long)]
    family_seed: Option<u64>,

    /// Number of sets / functions to aim for.
    #[arg(short, long)]
    k: Option<usize>,
    /// Slack: the pipelines return at least ceil((1 - delta) k) outputs.
    /// Defaults to 1/(2k), which yields exactly k.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Independent randomized attempts; the best outcome is kept.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Metric driving the geometric partition stage.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Gaussian dimension reduction before partitioning.
    #[arg(long, value_enum)]
    project: Option<OnOff>,
    /// Eigensolver backward-error tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Append per-trial scores as CSV for external plotting.
    #[arg(long)]
    emit_csv: Option<PathBuf>,
    /// File with one label per line mapping vertex ids to names.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Cap the worker thread count.
    #[arg(long)]
    threads: Option<usize>,
    /// Sum repeated edges in --input files instead of rejecting them.
    #[arg(long, default_value_t = false)]
    merge_duplicates: bool,
    /// Key = value config file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let matches = Args::command().get_matches();
    let mut args = match Args::from_arg_matches(&matches) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = args.config.clone() {
        if let Err(e) = apply_config_file(&mut args, &matches, &path) {
            return fail(e);
        }
    }
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

/// Fills in every field the user did not pass explicitly from a
/// `key = value` file (keys are the long flag names).
fn apply_config_file(args: &mut Args, matches: &ArgMatches, path: &PathBuf) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError {
        kind: ErrorKind::InputNotFound,
        message: format!("cannot read config {}: {e}", path.display()),
    })?;
    let explicit = |id: &str| matches.value_source(id) == Some(ValueSource::CommandLine);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError {
            kind: ErrorKind::BadConfig,
            message: format!("config line {}: expected `key = value`", lineno + 1),
        })?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let parse_err = |what: &str| CliError {
            kind: ErrorKind::BadConfig,
            message: format!("config line {}: bad {what} value {value:?}", lineno + 1),
        };
        macro_rules! set {
            ($field:ident, $what:expr) => {
                if !explicit(stringify!($field)) {
                    args.$field = Some(value.parse().map_err(|_| parse_err($what))?);
                }
            };
        }
        match key.as_str() {
            "input" => set!(input, "path"),
            "family" => set!(family, "family"),
            "n" => set!(n, "integer"),
            "rows" => set!(rows, "integer"),
            "cols" => set!(cols, "integer"),
            "clusters" => set!(clusters, "integer"),
            "size" => set!(size, "integer"),
            "bridge" => set!(bridge, "number"),
            "p_in" => set!(p_in, "number"),
            "p_out" => set!(p_out, "number"),
            "p" => set!(p, "number"),
            "dim" => set!(dim, "integer"),
            "eps" => set!(eps, "eps"),
            "family_seed" => set!(family_seed, "integer"),
            "k" => set!(k, "integer"),
            "delta" => set!(delta, "number"),
            "trials" => set!(trials, "integer"),
            "seed" => set!(seed, "integer"),
            "tol" => set!(tol, "number"),
            "algorithm" => {
                if !explicit("algorithm") {
                    args.algorithm = Some(
                        Algorithm::from_str(value, true).map_err(|_| parse_err("algorithm"))?,
                    );
                }
            }
            "metric" => {
                if !explicit("metric") {
                    args.metric =
                        Some(MetricArg::from_str(value, true).map_err(|_| parse_err("metric"))?);
                }
            }
            "project" => {
                if !explicit("project") {
                    args.project =
                        Some(OnOff::from_str(value, true).map_err(|_| parse_err("project"))?);
                }
            }
            other => {
                return Err(CliError {
                    kind: ErrorKind::BadConfig,
                    message: format!("config line {}: unknown key {other:?}", lineno + 1),
                });
            }
        }
    }
    Ok(())
}

fn build_family(args: &Args, seed: u64) -> Result<FamilySpec, CliError> {
    let family = args.family.as_deref().unwrap();
    let need = |opt: Option<usize>, what: &str| {
        opt.ok_or_else(|| CliError {
            kind: ErrorKind::BadConfig,
            message: format!("family {family} needs --{what}"),
        })
    };
    match family {
        "path" => Ok(FamilySpec::Path {
            n: need(args.n, "n")?,
        }),
        "cycle" => Ok(FamilySpec::Cycle {
            n: need(args.n, "n")?,
        }),
        "grid" => Ok(FamilySpec::Grid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
        }),
        "complete" => Ok(FamilySpec::Complete {
            n: need(args.n, "n")?,
        }),
        "clique-union" => Ok(FamilySpec::CliqueUnion {
            clusters: need(args.clusters, "clusters")?,
            size: need(args.size, "size")?,
            bridge: args.bridge.unwrap_or(1.0),
        }),
        "planted-partition" => Ok(FamilySpec::PlantedPartition {
            clusters: need(args.clusters, "clusters")?,
            size: need(args.size, "size")?,
            p_in: args.p_in.ok_or_else(|| CliError {
                kind: ErrorKind::BadConfig,
                message: "family planted-partition needs --p-in".into(),
            })?,
            p_out: args.p_out.ok_or_else(|| CliError {
                kind: ErrorKind::BadConfig,
                message: "family planted-partition needs --p-out".into(),
            })?,
            seed: args.family_seed.unwrap_or(seed),
        }),
        "gnp" => Ok(FamilySpec::Gnp {
            n: need(args.n, "n")?,
            p: args.p.ok_or_else(|| CliError {
                kind: ErrorKind::BadConfig,
                message: "family gnp needs --p".into(),
            })?,
            seed: args.family_seed.unwrap_or(seed),
        }),
        "noisy-hypercube" => {
            let dim = need(args.dim, "dim")?;
            let eps = match args.eps.as_deref() {
                None => {
                    return Err(CliError {
                        kind: ErrorKind::BadConfig,
                        message: "family noisy-hypercube needs --eps (number or `auto`)".into(),
                    })
                }
                Some("auto") => {
                    if dim < 3 {
                        return Err(CliError {
                            kind: ErrorKind::BadConfig,
                            message: "--eps auto needs dim >= 3 so that eps < 1".into(),
                        });
                    }
                    specpart::generators::hypercube_eps(dim, 1.0)
                }
                Some(tok) => tok.parse::<f64>().map_err(|_| CliError {
                    kind: ErrorKind::BadConfig,
                    message: format!("bad --eps value {tok:?}"),
                })?,
            };
            Ok(FamilySpec::NoisyHypercube { dim, eps })
        }
        other => Err(CliError {
            kind: ErrorKind::BadConfig,
            message: format!("unknown family {other:?}"),
        }),
    }
}

fn run(args: Args) -> Result<(), CliError> {
    if let Some(threads) = args.threads {
        // Ignore failure: the global pool may already exist in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    if args.input.is_some() == args.family.is_some() {
        return Err(CliError {
            kind: ErrorKind::BadConfig,
            message: "exactly one of --input / --family must be given".into(),
        });
    }
    let k = args.k.ok_or_else(|| CliError {
        kind: ErrorKind::BadConfig,
        message: "--k is required".into(),
    })?;
    let algorithm = args.algorithm.ok_or_else(|| CliError {
        kind: ErrorKind::BadConfig,
        message: "--algorithm is required".into(),
    })?;
    let seed = args.seed.unwrap_or(0);

    let start = Instant::now();
    let mut family_spec: Option<FamilySpec> = None;
    let (graph, source): (WeightedGraph, serde_json::Value) = if let Some(path) = &args.input {
        let g = specpart::io::read_graph_with(path, args.merge_duplicates)
            .map_err(CliError::from_io)?;
        (g, serde_json::json!({ "input": path.display().to_string() }))
    } else {
        let spec = build_family(&args, seed)?;
        let (g, _truth) = spec.build().map_err(CliError::from_generator)?;
        let json = report::family_json(&spec);
        family_spec = Some(spec);
        (g, json)
    };

    let mut cfg = PipelineConfig::new(k).with_seed(seed);
    if let Some(delta) = args.delta {
        cfg = cfg.with_delta(delta);
    }
    if let Some(trials) = args.trials {
        cfg = cfg.with_trials(trials);
    }
    if let Some(tol) = args.tol {
        cfg.eig_tol = tol;
    }
    cfg.metric = match args.metric.unwrap_or(MetricArg::Radial) {
        MetricArg::Radial => Metric::Radial,
        MetricArg::InducedPath => Metric::InducedPath,
    };
    cfg.project = args.project.unwrap_or(OnOff::On) == OnOff::On;
    let delta = cfg.effective_delta();

    let mut rep = Report::new(algorithm.to_string(), &graph, k, delta, seed, source);
    match algorithm {
        Algorithm::Functions => {
            let out = if cfg.project {
                disjoint_support_functions_reduced(&graph, k, delta, &cfg)
            } else {
                disjoint_support_functions(&graph, k, delta, &cfg)
            }
            .map_err(CliError::from_pipeline)?;
            rep.fill_functions(&out);
        }
        Algorithm::Cuts => {
            let out = k_sparse_cuts(&graph, k, delta, &cfg).map_err(CliError::from_pipeline)?;
            rep.fill_cuts(&graph, &out);
        }
        Algorithm::Partition => {
            let out = k_way_partition(&graph, k, &cfg).map_err(CliError::from_pipeline)?;
            rep.fill_partition(&graph, &out);
        }
    }
    if let Some(FamilySpec::NoisyHypercube { eps, .. }) = family_spec {
        rep.check_hypercube(eps);
    }
    if let Some(path) = &args.labels {
        let text = fs::read_to_string(path).map_err(|e| CliError {
            kind: ErrorKind::InputNotFound,
            message: format!("cannot read labels {}: {e}", path.display()),
        })?;
        let labels: Vec<String> = text.lines().map(|l| l.to_string()).collect();
        rep.apply_labels(&labels)?;
    }
    rep.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    if let Some(path) = &args.emit_csv {
        let mut csv = String::from("trial,score\n");
        for (i, score) in rep.trial_scores.iter().enumerate() {
            match score {
                Some(s) => csv.push_str(&format!("{i},{s}\n")),
                None => csv.push_str(&format!("{i},\n")),
            }
        }
        fs::write(path, csv).map_err(|e| CliError {
            kind: ErrorKind::Io,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }

    let json = rep.to_json();
    match &args.output {
        Some(path) => fs::write(path, &json).map_err(|e| CliError {
            kind: ErrorKind::Io,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{json}");
        }
    }
    Ok(())
}

impl CliError {
    fn from_pipeline(e: PipelineError) -> Self {
        match e {
            PipelineError::BadConfig(message) => CliError {
                kind: ErrorKind::BadConfig,
                message,
            },
            PipelineError::PipelineFailure { .. } => CliError {
                kind: ErrorKind::PipelineFailure,
                message: e.to_string(),
            },
            PipelineError::Spectral(inner) => CliError {
                kind: ErrorKind::PipelineFailure,
                message: inner.to_string(),
            },
            PipelineError::Geometry(inner) => CliError {
                kind: ErrorKind::PipelineFailure,
                message: inner.to_string(),
            },
        }
    }

    fn from_io(e: specpart::io::IoError) -> Self {
        let kind = match &e {
            specpart::io::IoError::Open { .. } => ErrorKind::InputNotFound,
            specpart::io::IoError::Graph(_) => ErrorKind::InvalidGraph,
            _ => ErrorKind::Parse,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }

    fn from_generator(e: specpart::generators::GeneratorError) -> Self {
        CliError {
            kind: ErrorKind::BadConfig,
            message: e.to_string(),
        }
    }
}
