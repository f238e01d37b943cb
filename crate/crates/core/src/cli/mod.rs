//! The `ncs` command line. All JSON output has sorted keys and sorted edge
//! lists so identical invocations print identical bytes.

mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use serde_json::{json, Value};

use crate::bounds::tight_bound;
use crate::error::NcsError;
use crate::graph::{format::to_json, NcsGraph};
use crate::linsys::ClockState;
use crate::min_graph::{
    greedy_min_degree_construction, minimum_ncs_graphs, MinGraphOptions, DEFAULT_LIMIT,
};
use crate::rational::format_rational;
use crate::sim::rng::{any_rational, nonzero_rational};
use crate::sim::{
    generate_exact_round, generate_round_with, random_truth, run_campaign, stream_rng, summarize,
    FaultMap, NoiseModel,
};
use crate::solvers::{solve_exact, solve_noisy, Algorithm, DEFAULT_ETA};
use crate::tiered::build_tiered_plan;

use io::{edge_values_json, read_graph, read_measurements, read_text, Measurements};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ncs",
    version,
    about = "Fault-correcting network clock synchronization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Edge connectivity, tight resilience bound and a witness cut of a graph.
    Bound {
        /// Graph file (JSON object or edge list).
        #[arg(long)]
        graph: PathBuf,
    },
    /// Minimum k-resilient graphs on a given number of nodes.
    MinGraph {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        k: usize,
        /// Keep one graph per isomorphism class.
        #[arg(long)]
        dedup: bool,
        /// Maximum number of graphs to print.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Solves one round from a measurement file.
    Sync {
        /// Measurement file: {"graph": ..., "measurements": [[a, b, value], ...]}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Fast)]
        algorithm: AlgorithmArg,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Residual and detection threshold (noisy mode).
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
    },
    /// Seeded noisy fault-injection campaign.
    Simulate(SimulateArgs),
    /// Tiered group plan for N nodes.
    Tier {
        #[arg(long)]
        nodes: usize,
    },
    /// Generates graphs and synthetic measurement files.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated fault counts.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    faults: Vec<usize>,
    /// Trials per fault count.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standard deviation of the Gaussian measurement noise.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Smallest fault magnitude.
    #[arg(long, default_value_t = 2.0)]
    fmin: f64,
    /// Largest fault magnitude.
    #[arg(long, default_value_t = 8.0)]
    fmax: f64,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Fast)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Prints a graph file.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        #[arg(long)]
        nodes: usize,
        /// Target resilience for `minimum` and `greedy`.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Writes a measurement file for one round with injected faults.
    Round {
        #[arg(long)]
        graph: PathBuf,
        /// Number of faulty sessions.
        #[arg(long, default_value_t = 0)]
        faults: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Noise standard deviation (noisy mode).
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 2.0)]
        fmin: f64,
        #[arg(long, default_value_t = 8.0)]
        fmax: f64,
        /// Measurement file path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the true offsets and injected faults.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Exhaustive,
    Fast,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exhaustive => Algorithm::Exhaustive,
            AlgorithmArg::Fast => Algorithm::Fast,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Noisy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Complete,
    Star,
    Cycle,
    /// Smallest k-resilient graph found by search.
    Minimum,
    /// Degree-sequence construction; not always minimum.
    Greedy,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<NcsError> for CliError {
    fn from(e: NcsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

/// Applies `NCS_THREADS` (0 or unset = rayon's default) to the global pool.
fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("NCS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("NCS_THREADS must be a non-negative integer, got {raw:?}"))?;
    if n > 0 {
        // a pool may already exist when embedded; keeping it is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Bound { graph } => {
            let g = read_graph(&graph)?;
            let report = tight_bound(&g)?;
            emit(
                out,
                &serde_json::to_value(report).expect("report serializes"),
            )
        }
        Command::MinGraph {
            nodes,
            k,
            dedup,
            limit,
        } => {
            let r = minimum_ncs_graphs(
                nodes,
                k,
                MinGraphOptions {
                    limit,
                    dedup_isomorphic: dedup,
                },
            )?;
            let v = json!({
                "achieves_lower_bound": r.achieves_lower_bound,
                "edge_count": r.edge_count,
                "graphs": r.graphs.iter().map(to_json).collect::<Vec<_>>(),
                "lower_bound": r.lower_bound,
                "nodes": nodes,
                "k": k,
                "total_found": r.total_found,
            });
            emit(out, &v)
        }
        Command::Sync {
            input,
            algorithm,
            mode,
            eta,
        } => sync(&input, algorithm.into(), mode, eta, out),
        Command::Simulate(args) => simulate(args, out, err),
        Command::Tier { nodes } => {
            let plan = build_tiered_plan(nodes)?;
            emit(out, &serde_json::to_value(plan).expect("plan serializes"))
        }
        Command::Gen(GenCommand::Graph { kind, nodes, k }) => {
            let g = match kind {
                GraphKind::Complete => NcsGraph::complete(nodes),
                GraphKind::Star => NcsGraph::star(nodes),
                GraphKind::Cycle => NcsGraph::cycle(nodes),
                GraphKind::Minimum => {
                    let r = minimum_ncs_graphs(
                        nodes,
                        k,
                        MinGraphOptions {
                            limit: 1,
                            dedup_isomorphic: false,
                        },
                    )?;
                    r.graphs
                        .into_iter()
                        .next()
                        .ok_or(NcsError::Infeasible { nodes, k })?
                }
                GraphKind::Greedy => greedy_min_degree_construction(nodes, k)?,
            };
            emit(out, &to_json(&g))
        }
        Command::Gen(GenCommand::Round {
            graph,
            faults,
            seed,
            mode,
            sigma,
            fmin,
            fmax,
            out: path,
            truth,
        }) => {
            let g = read_graph(&graph)?;
            let noise = NoiseModel {
                gaussian_sigma: sigma,
                fault_magnitude_range: (fmin, fmax),
                ..NoiseModel::default()
            };
            let (measurements, truth_doc) = gen_round(&g, faults, seed, mode, &noise, err)?;
            if let Some(p) = truth {
                write_json(&p, &truth_doc)?;
            }
            match path {
                Some(p) => write_json(&p, &measurements),
                None => emit(out, &measurements),
            }
        }
    }
}

fn sync(
    input: &Path,
    algorithm: Algorithm,
    mode: Mode,
    eta: f64,
    out: &mut dyn Write,
) -> CliResult<()> {
    let text = read_text(input)?;
    if mode == Mode::Noisy && !(eta >= 0.0 && eta.is_finite()) {
        return Err(CliError::Usage(
            "--eta must be finite and non-negative".into(),
        ));
    }
    emit(
        out,
        &sync_document(&text, algorithm, mode == Mode::Exact, eta)?,
    )
}

/// Solves a measurement file and returns the JSON printed by `ncs sync`.
/// `eta` is only used when `exact` is false.
pub fn sync_document(
    text: &str,
    algorithm: Algorithm,
    exact: bool,
    eta: f64,
) -> crate::error::Result<Value> {
    match read_measurements(text, exact)? {
        Measurements::Exact(g, m) => {
            let r = solve_exact(algorithm, &g, &m)?;
            let detected = crate::solvers::detect_faults(&g, &m, &r.solution.clock_state())?;
            Ok(json!({
                "algorithm": algorithm,
                "assumed_distribution": r.assumed_distribution.map(|d| d.assumed_faulty.into_iter().collect::<Vec<_>>()),
                "detected_faults": edge_values_json(detected.iter().map(|(e, v)| (*e, Value::from(format_rational(v))))),
                "exact": true,
                "iterations_examined": r.iterations_examined,
                "offsets": r.solution.offsets.iter().map(format_rational).collect::<Vec<_>>(),
            }))
        }
        Measurements::Noisy(g, m) => {
            if !(eta >= 0.0 && eta.is_finite()) {
                return Err(NcsError::InvalidArgument(
                    "eta must be finite and non-negative".into(),
                ));
            }
            let r = solve_noisy(algorithm, &g, &m, eta)?;
            let detected =
                crate::solvers::detect_faults_above(&g, &m, &r.solution.clock_state(), eta)?;
            Ok(json!({
                "algorithm": algorithm,
                "assumed_distribution": r.assumed_distribution.map(|d| d.assumed_faulty.into_iter().collect::<Vec<_>>()),
                "detected_faults": edge_values_json(detected.iter().map(|(e, v)| (*e, Value::from(*v)))),
                "eta": eta,
                "exact": false,
                "iterations_examined": r.iterations_examined,
                "offsets": r.solution.offsets,
            }))
        }
    }
}

fn simulate(args: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let g = read_graph(&args.graph)?;
    let config = NoiseModel {
        gaussian_sigma: args.sigma,
        fault_magnitude_range: (args.fmin, args.fmax),
        fault_probability: 0.0,
        threshold_eta: args.eta,
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    for w in config.warnings() {
        let _ = writeln!(err, "warning: {w}");
    }
    let records = run_campaign(
        &g,
        &config,
        &args.faults,
        args.trials,
        args.seed,
        args.algorithm.into(),
    )?;
    let summary = summarize(&records);
    match args.format {
        Format::Json => emit(
            out,
            &json!({
                "algorithm": Algorithm::from(args.algorithm),
                "config": config,
                "records": records,
                "seed": args.seed,
                "summary": summary,
            }),
        ),
        Format::Csv => {
            let mut s = String::from("trial_id,fault_count,identical,mse\n");
            for r in &records {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    r.trial_id, r.fault_count, r.distributions_identical, r.mse_offsets
                ));
            }
            write_out(out, &s)
        }
        Format::Text => {
            let mut s = format!(
                "{:>6} {:>7} {:>10} {:>12}\n",
                "faults", "trials", "identical", "mean_mse"
            );
            for row in &summary {
                s.push_str(&format!(
                    "{:>6} {:>7} {:>10.3} {:>12.4}\n",
                    row.fault_count, row.trials, row.identical_rate, row.mean_mse
                ));
            }
            write_out(out, &s)
        }
    }
}

/// One synthetic round: `(measurement file, truth file)`.
fn gen_round(
    g: &NcsGraph,
    faults: usize,
    seed: u64,
    mode: Mode,
    noise: &NoiseModel,
    err: &mut dyn Write,
) -> CliResult<(Value, Value)> {
    if faults > g.edge_count() {
        return Err(NcsError::TooManyFaults {
            count: faults,
            edges: g.edge_count(),
        }
        .into());
    }
    let bound = tight_bound(g)?.tight_bound;
    if faults > bound {
        let _ = writeln!(
            err,
            "warning: {faults} faults exceed the tight bound {bound}; recovery is not guaranteed"
        );
    }
    let mut rng = stream_rng(seed, 0);
    let graph = to_json(g);
    match mode {
        Mode::Exact => {
            let truth = ClockState::new(
                (1..g.node_count())
                    .map(|_| any_rational(&mut rng, 40, 4))
                    .collect(),
            );
            let mut idx = sample(&mut rng, g.edge_count(), faults).into_vec();
            idx.sort_unstable();
            let fm = FaultMap::from_pairs(
                idx.into_iter()
                    .map(|i| (g.edges()[i], nonzero_rational(&mut rng, 50, 8))),
            )?;
            let m = generate_exact_round(g, &truth, &fm)?;
            let str_of = |(e, v): (crate::graph::Edge, &crate::rational::Rational)| {
                (e, Value::from(format_rational(v)))
            };
            Ok((
                json!({ "exact": true, "graph": graph, "measurements": edge_values_json(m.iter().map(str_of)) }),
                json!({
                    "exact": true,
                    "faults": edge_values_json(fm.iter().map(str_of)),
                    "offsets": truth.offsets().iter().map(format_rational).collect::<Vec<_>>(),
                }),
            ))
        }
        Mode::Noisy => {
            noise
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let truth = random_truth(g, &mut rng);
            let fm = noise.sample_faults(g, faults, &mut rng)?;
            let m = generate_round_with(g, &truth, &fm, Some(noise), &mut rng)?;
            let num = |(e, v): (crate::graph::Edge, &f64)| (e, Value::from(*v));
            Ok((
                json!({ "exact": false, "graph": graph, "measurements": edge_values_json(m.iter().map(num)) }),
                json!({ "exact": false, "faults": edge_values_json(fm.iter().map(num)), "offsets": truth.offsets() }),
            ))
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    write_out(out, &s)
}

fn write_out(out: &mut dyn Write, s: &str) -> CliResult<()> {
    out.write_all(s.as_bytes())
        .map_err(|e| CliError::Domain(format!("writing output: {e}")))
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    std::fs::write(path, s)
        .map_err(|e| CliError::Domain(format!("writing {}: {e}", path.display())))
}
