//! Command-line front end: partition enumeration, symbolic expansion,
//! numeric composition of jets, the one-variable coefficient table, and the
//! built-in verification suites.
//!
//! Exit codes are a stable contract: 0 on success, 1 when a verification
//! suite finds a mismatch, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Value};

use faadibruno::scalar::Scalar;
use faadibruno::{
    compose_jet, expand_symbolic, faa_di_bruno_1d, multiset_partitions, run_verification,
    stirling2, DerivativeTensor, MapJet, Mode, MultisetIndex, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "faadibruno",
    version,
    about = "Higher-order chain rule calculator for compositions of multivariate maps"
)]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Scalar arithmetic for compose and verify; compose infers the mode
    /// from its input files and rejects a conflicting flag.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

impl ModeArg {
    fn to_mode(self) -> Mode {
        match self {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the k-block partitions of a derivative index.
    Partitions(PartitionsArgs),
    /// Print the symbolic chain-rule expansion of a derivative index.
    Expand(ExpandArgs),
    /// Compute the derivative tensor of f∘g from jet files.
    Compose(ComposeArgs),
    /// Print the one-variable chain-rule coefficient table.
    Faa1d(Faa1dArgs),
    /// Run the built-in verification suites.
    Verify(VerifyArgs),
}

/// One derivative index, given either as a multiplicity vector or as a
/// label list.
#[derive(Args)]
struct IndexInput {
    /// Index as a JSON multiplicity vector, e.g. "[2,1]" for two 1s and one 2.
    #[arg(long, value_name = "JSON", conflicts_with = "labels")]
    alpha: Option<String>,

    /// The same index as comma-separated labels, e.g. "1,1,2".
    #[arg(long, value_name = "LIST")]
    labels: Option<String>,

    /// Carrier dimension for --labels; defaults to the largest label.
    #[arg(long, value_name = "D", requires = "labels")]
    dim: Option<usize>,
}

impl IndexInput {
    fn parse(&self) -> Result<MultisetIndex, String> {
        match (&self.alpha, &self.labels) {
            (Some(text), None) => {
                let v: Value = serde_json::from_str(text)
                    .map_err(|e| format!("--alpha is not valid JSON: {e}"))?;
                MultisetIndex::from_json(&v).map_err(|e| e.to_string())
            }
            (None, Some(list)) => {
                let labels = list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| format!("--labels entry {:?} is not an integer", s.trim()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let dim = match self.dim {
                    Some(d) => d,
                    None => *labels.iter().max().unwrap_or(&0),
                };
                if dim == 0 {
                    return Err("--labels needs at least one label >= 1".into());
                }
                MultisetIndex::from_labels(dim, &labels).map_err(|e| e.to_string())
            }
            _ => Err("provide exactly one of --alpha or --labels".into()),
        }
    }
}

#[derive(Args)]
struct PartitionsArgs {
    #[command(flatten)]
    index: IndexInput,

    /// Number of blocks.
    #[arg(long)]
    k: usize,

    /// Print only {cardinality, distinct, stirling2} instead of the
    /// full enumeration.
    #[arg(long)]
    counts_only: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    index: IndexInput,

    /// Number of components of the inner map.
    #[arg(long)]
    c: usize,

    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Copy, Clone, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ComposeArgs {
    /// Derivative tensor of the outer scalar function at the image point.
    #[arg(long, value_name = "FILE")]
    f_jet: PathBuf,

    /// Jet of the inner map at the base point.
    #[arg(long, value_name = "FILE")]
    g_jet: PathBuf,

    /// Highest derivative order to compute.
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct Faa1dArgs {
    /// Derivative order, between 1 and 12.
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random trials per randomized suite.
    #[arg(long, default_value_t = 50)]
    trials: usize,

    /// Seed for the random trials.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Highest derivative order exercised (at most 5).
    #[arg(long, default_value_t = 4)]
    max_order: usize,

    /// Input and output dimensions as "d,c" (each at most 3).
    #[arg(long, default_value = "2,2")]
    dims: String,
}

fn main() {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(pair) => pair,
        Err(message) => {
            eprintln!("error: {message}");
            process::exit(2);
        }
    };
    if let Some(path) = &cli.output {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            process::exit(2);
        }
    } else {
        let stdout = std::io::stdout();
        let mut handle = stdout.lock();
        if handle.write_all(text.as_bytes()).and_then(|_| handle.flush()).is_err() {
            process::exit(2);
        }
    }
    process::exit(code);
}

fn run(cli: &Cli) -> Result<(String, i32), String> {
    match &cli.command {
        Command::Partitions(args) => Ok((cmd_partitions(args)?, 0)),
        Command::Expand(args) => Ok((cmd_expand(args)?, 0)),
        Command::Compose(args) => Ok((cmd_compose(args, cli.mode)?, 0)),
        Command::Faa1d(args) => Ok((cmd_faa1d(args)?, 0)),
        Command::Verify(args) => cmd_verify(args, cli.mode),
    }
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("JSON value serializes");
    text.push('\n');
    text
}

fn cmd_partitions(args: &PartitionsArgs) -> Result<String, String> {
    let alpha = args.index.parse()?;
    let enumeration = multiset_partitions(&alpha, args.k);
    if args.counts_only {
        let counts = json!({
            "distinct": enumeration.distinct_count(),
            "cardinality": enumeration.total_multiplicity().to_string(),
            "stirling2": stirling2(alpha.cardinality(), args.k).to_string(),
        });
        Ok(pretty(&counts))
    } else {
        Ok(pretty(&enumeration.to_json()))
    }
}

fn cmd_expand(args: &ExpandArgs) -> Result<String, String> {
    let alpha = args.index.parse()?;
    let expansion = expand_symbolic(&alpha, args.c).map_err(|e| e.to_string())?;
    match args.format {
        OutputFormat::Text => Ok(expansion.render_text()),
        OutputFormat::Json => Ok(pretty(&expansion.to_json())),
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{} is not valid JSON: {e}", path.display()))
}

fn cmd_compose(args: &ComposeArgs, cli_mode: Option<ModeArg>) -> Result<String, String> {
    let f_json = read_json(&args.f_jet)?;
    let g_json = read_json(&args.g_jet)?;
    let file_mode = f_json
        .get("mode")
        .and_then(Value::as_str)
        .ok_or_else(|| format!("{} has no \"mode\" field", args.f_jet.display()))?
        .to_owned();
    if let Some(flag) = cli_mode {
        if flag.to_mode().as_str() != file_mode {
            return Err(format!(
                "--mode {} conflicts with mode \"{}\" in {}",
                flag.to_mode(),
                file_mode,
                args.f_jet.display()
            ));
        }
    }
    match file_mode.as_str() {
        "rational" => compose_typed::<BigRational>(&f_json, &g_json, args.order),
        "float" => compose_typed::<f64>(&f_json, &g_json, args.order),
        other => Err(format!(
            "unknown mode {:?} in {}",
            other,
            args.f_jet.display()
        )),
    }
}

fn compose_typed<S: Scalar>(f: &Value, g: &Value, order: usize) -> Result<String, String> {
    let f_jet = DerivativeTensor::<S>::from_json(f).map_err(|e| format!("f jet: {e}"))?;
    let g_jet = MapJet::<S>::from_json(g).map_err(|e| format!("g jet: {e}"))?;
    let composed = compose_jet(&f_jet, &g_jet, order).map_err(|e| e.to_string())?;
    Ok(pretty(&composed.to_json()))
}

fn cmd_faa1d(args: &Faa1dArgs) -> Result<String, String> {
    if !(1..=12).contains(&args.n) {
        return Err(format!(
            "n={} out of range; the table is printed for 1 <= n <= 12",
            args.n
        ));
    }
    let mut out = String::new();
    for row in faa_di_bruno_1d(args.n) {
        let m = row
            .part_counts
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!(
            "k={} m=[{}] coefficient={}\n",
            row.k, m, row.coefficient
        ));
    }
    Ok(out)
}

fn cmd_verify(args: &VerifyArgs, cli_mode: Option<ModeArg>) -> Result<(String, i32), String> {
    let dims: Vec<&str> = args.dims.split(',').collect();
    if dims.len() != 2 {
        return Err(format!("--dims must be \"d,c\", got {:?}", args.dims));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("--dims entry {:?} is not an integer", s.trim()))
    };
    let cfg = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        max_order: args.max_order,
        in_dim: parse(dims[0])?,
        out_dim: parse(dims[1])?,
        mode: cli_mode.map(ModeArg::to_mode).unwrap_or(Mode::Rational),
    };
    let report = run_verification(&cfg).map_err(|e| e.to_string())?;
    let code = if report.all_passed() { 0 } else { 1 };
    Ok((report.render_text(), code))
}
