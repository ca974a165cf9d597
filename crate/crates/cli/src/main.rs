//! `isingpf` — exact even-subgraph and Ising partition sums on embedded
//! multigraphs, evaluated as signed combinations of `4^genus` Pfaffians.
//!
//! Every subcommand reads a graph-with-rotation file (see the `V`/`E`/`R`
//! format in the core crate), prints one JSON document, and exits with
//! 0 on success, 1 on a verification failure, 2 on an input error, and 3
//! when a requested computation exceeds its enumeration cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use isingpf_core::engine::{
    even_poly, expand_and_fit, family_json, ising_partition, matching_poly,
    optimality_certificate, verify, EngineOptions,
};
use isingpf_core::graph::{Multigraph, DEFAULT_CAP};
use isingpf_core::signfit::FitMode;
use isingpf_core::surface::{trace_faces, RotationSystem};
use isingpf_core::{format, Error, Rational};

#[derive(Parser)]
#[command(
    name = "isingpf",
    version,
    about = "Exact even-subgraph and Ising partition sums via Pfaffian families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the faces of the embedding and report its genus
    Genus(CommonArgs),
    /// Evaluate the even-subgraph generating polynomial
    Evenpoly(EvalArgs),
    /// Evaluate the Ising partition function
    Ising(IsingArgs),
    /// Evaluate the perfect-matching generating polynomial
    Matchpoly(EvalArgs),
    /// Compare the Pfaffian combination against brute-force enumeration
    Verify(VerifyArgs),
    /// Emit the rank certificate showing all 4^genus Pfaffians are needed
    Optimality(CommonArgs),
    /// Export the fitted Pfaffian family
    Family(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file in the V/E/R format
    file: PathBuf,
    /// Constraint source for the sign fit
    #[arg(long, value_enum, default_value_t = Mode::Quadratic)]
    mode: Mode,
    /// Cap on enumerations and on the family size
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Worker threads for the Pfaffian evaluations
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Omit timing fields so repeated runs are byte-identical
    #[arg(long)]
    no_timing: bool,
    /// Write the JSON document here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Mode {
    /// Empty set, fundamental cycles, and their pairwise differences
    Quadratic,
    /// Every even subset (or matching), subject to the cap
    Exhaustive,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// JSON file mapping edge ids to weights: {"0": "1/2", "1": "-3", ...}
    #[arg(long, conflicts_with = "all_ones")]
    weights: Option<PathBuf>,
    /// Weight every edge 1
    #[arg(long)]
    all_ones: bool,
    /// Evaluate with f64 Pfaffians instead of exact rationals
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct IsingArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// JSON file mapping edge ids to couplings x_e = exp(beta_e)
    #[arg(long, conflicts_with = "uniform")]
    x: Option<PathBuf>,
    /// One coupling for every edge, e.g. `--uniform 3/2`
    #[arg(long)]
    uniform: Option<String>,
    /// Evaluate with f64 Pfaffians instead of exact rationals
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of random weight draws
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Seed for the weight draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: e.exit_code() as u8,
            msg: e.to_string(),
        }
    }
}

fn input_error(msg: String) -> Failure {
    Failure { code: 2, msg }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_graph(path: &Path) -> Result<(Multigraph, RotationSystem), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(format::parse(&text)?)
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).ok()?;
    let d = BigInt::from_str(d).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Read `{"<edge id>": "p/q", ...}`, requiring a weight for every edge.
fn load_weight_file(path: &Path, edge_count: usize) -> Result<Vec<Rational>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let map: serde_json::Map<String, Value> = serde_json::from_str(&text)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let mut weights: Vec<Option<Rational>> = vec![None; edge_count];
    for (key, value) in &map {
        let edge: usize = key
            .parse()
            .map_err(|_| input_error(format!("weight key `{key}` is not an edge id")))?;
        if edge >= edge_count {
            return Err(input_error(format!(
                "weight given for edge {edge}, but the graph has {edge_count} edges"
            )));
        }
        let text = value
            .as_str()
            .ok_or_else(|| Error::BadWeight {
                edge,
                msg: "weights must be strings like \"2/3\"".into(),
            })?;
        let w = parse_rational(text).ok_or_else(|| Error::BadWeight {
            edge,
            msg: format!("cannot parse `{text}` as a rational"),
        })?;
        weights[edge] = Some(w);
    }
    weights
        .into_iter()
        .enumerate()
        .map(|(edge, w)| w.ok_or_else(|| Error::MissingWeight { edge }.into()))
        .collect()
}

fn eval_weights(args: &EvalArgs, edge_count: usize) -> Result<Vec<Rational>, Failure> {
    match (&args.weights, args.all_ones) {
        (Some(path), false) => load_weight_file(path, edge_count),
        (None, true) => Ok(vec![Rational::from_integer(1.into()); edge_count]),
        (None, false) => Err(input_error(
            "provide --weights <file> or --all-ones".into(),
        )),
        (Some(_), true) => unreachable!("clap rejects the conflict"),
    }
}

fn engine_options(common: &CommonArgs) -> EngineOptions {
    EngineOptions {
        mode: match common.mode {
            Mode::Quadratic => FitMode::QuadraticCertified,
            Mode::Exhaustive => FitMode::Exhaustive,
        },
        cap: common.cap,
        jobs: common.jobs.max(1),
    }
}

fn emit(common: &CommonArgs, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialization");
    text.push('\n');
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Genus(common) => {
            let (g, rot) = load_graph(&common.file)?;
            let faces = trace_faces(&g, &rot)?;
            emit(
                &common,
                &serde_json::json!({
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "components": faces.components,
                    "faces": faces.faces.len(),
                    "genus": faces.genus,
                }),
            )
        }
        Command::Evenpoly(args) => {
            let (g, rot) = load_graph(&args.common.file)?;
            let weights = eval_weights(&args, g.edge_count())?;
            let opts = engine_options(&args.common);
            let json = if args.float {
                even_poly::<f64>(&g, &rot, &weights, &opts)?.to_json(!args.common.no_timing)
            } else {
                even_poly::<Rational>(&g, &rot, &weights, &opts)?.to_json(!args.common.no_timing)
            };
            emit(&args.common, &json)
        }
        Command::Ising(args) => {
            let (g, rot) = load_graph(&args.common.file)?;
            let x = match (&args.x, &args.uniform) {
                (Some(path), None) => load_weight_file(path, g.edge_count())?,
                (None, Some(text)) => {
                    let v = parse_rational(text).ok_or_else(|| {
                        input_error(format!("cannot parse `{text}` as a rational"))
                    })?;
                    vec![v; g.edge_count()]
                }
                (None, None) => {
                    return Err(input_error("provide --x <file> or --uniform <p/q>".into()))
                }
                (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
            };
            let opts = engine_options(&args.common);
            let json = if args.float {
                ising_partition::<f64>(&g, &rot, &x, &opts)?.to_json(!args.common.no_timing)
            } else {
                ising_partition::<Rational>(&g, &rot, &x, &opts)?.to_json(!args.common.no_timing)
            };
            emit(&args.common, &json)
        }
        Command::Matchpoly(args) => {
            let (g, rot) = load_graph(&args.common.file)?;
            let weights = eval_weights(&args, g.edge_count())?;
            let opts = engine_options(&args.common);
            let json = if args.float {
                matching_poly::<f64>(&g, &rot, &weights, &opts)?.to_json(!args.common.no_timing)
            } else {
                matching_poly::<Rational>(&g, &rot, &weights, &opts)?
                    .to_json(!args.common.no_timing)
            };
            emit(&args.common, &json)
        }
        Command::Verify(args) => {
            let (g, rot) = load_graph(&args.common.file)?;
            let opts = engine_options(&args.common);
            let report = verify(&g, &rot, args.trials, args.seed, &opts)?;
            emit(&args.common, &report.to_json())?;
            if report.all_matched() {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    msg: format!(
                        "{} of {} trials disagreed with enumeration",
                        report.trials - report.matched,
                        report.trials
                    ),
                })
            }
        }
        Command::Optimality(common) => {
            let (g, rot) = load_graph(&common.file)?;
            let opts = engine_options(&common);
            let report = optimality_certificate(&g, &rot, &opts)?;
            emit(&common, &report.to_json())?;
            if report.certified() {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    msg: "certificate checks failed".into(),
                })
            }
        }
        Command::Family(common) => {
            let (g, rot) = load_graph(&common.file)?;
            let opts = engine_options(&common);
            let ex = expand_and_fit(&g, &rot, &opts)?;
            emit(&common, &family_json(&ex.fit, &ex.family))
        }
    }
}
