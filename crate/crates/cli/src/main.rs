//! `dbbound`: dependence-balance and cut-set outer bounds for Gaussian
//! two-user channels with generalized feedback, as CSV/JSON artifacts.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
mod config;
mod output;

use commands::{BoundOptions, Format};
use config::{parse_number, Bound, Model, PartialConfig};

const FLAG_TABLE: &str = "\
Parameter flags (all default to 1):
  --p1, --p2     transmit powers P1, P2
  --sz           receiver noise variance σ_Z²            (mac-nf, mac-nf-common, mac-uc)
  --sz1, --sz2   feedback / cooperation noise σ_Z1², σ_Z2² (mac-nf, mac-uc, ic-uc; `inf` allowed)
  --sv           common feedback noise σ_V²              (mac-nf-common)
  --h10, --h20   direct-link power gains                 (mac-uc)
  --h12, --h21   cooperation-link power gains            (mac-uc, ic-uc)
  --n1, --n2     receiver noise variances σ_N1², σ_N2²   (ic-uc)
  --a, --b       cross-link power gains                  (ic-uc)

Numbers accept decimal, `inf`, or hex floats (0x1.8p+1).

Config files hold the same keys as `key = value` lines (`#` comments), plus
`model`, `bound`, `grid`, `fine` and `full_range`. Flags override the file.

Exit codes: 0 ok, 1 check failed, 2 invalid configuration, 3 numeric failure.
DBBOUND_THREADS caps the worker threads.";

#[derive(Parser)]
#[command(name = "dbbound", version, about, after_help = FLAG_TABLE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one bound's rate-region frontier.
    Bound(BoundArgs),
    /// Check whether region A lies inside region B.
    Compare(CompareArgs),
    /// Interference channel: maximum sum rate of both bounds versus the
    /// cooperation gain h = h12 = h21.
    SweepH(SweepArgs),
    /// Cross-check every closed form on random configurations.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").args(["db", "cutset", "nofb", "nocoop", "ozarow", "totalcoop"])))]
struct BoundFlags {
    /// Dependence-balance bound
    #[arg(long)]
    db: bool,
    /// Cut-set bound
    #[arg(long)]
    cutset: bool,
    /// No-feedback capacity region (feedback MAC)
    #[arg(long)]
    nofb: bool,
    /// Capacity region without cooperation
    #[arg(long)]
    nocoop: bool,
    /// Noiseless-feedback capacity region (feedback MAC)
    #[arg(long)]
    ozarow: bool,
    /// Sum-rate line with fully coherent inputs (cooperative MAC)
    #[arg(long)]
    totalcoop: bool,
}

impl BoundFlags {
    fn selected(&self) -> Option<Bound> {
        [
            (self.db, Bound::Db),
            (self.cutset, Bound::Cutset),
            (self.nofb, Bound::Nofb),
            (self.nocoop, Bound::Nocoop),
            (self.ozarow, Bound::Ozarow),
            (self.totalcoop, Bound::Totalcoop),
        ]
        .into_iter()
        .find_map(|(on, b)| on.then_some(b))
    }
}

#[derive(Args, Default)]
struct ParamFlags {
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    p1: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    p2: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    sz: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    sz1: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    sz2: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    sv: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    h10: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    h20: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    h12: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    h21: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    n1: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    n2: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    a: Option<f64>,
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true, help_heading = "Channel")]
    b: Option<f64>,
}

impl ParamFlags {
    fn to_map(&self) -> BTreeMap<&'static str, f64> {
        let all = [
            ("p1", self.p1),
            ("p2", self.p2),
            ("sz", self.sz),
            ("sz1", self.sz1),
            ("sz2", self.sz2),
            ("sv", self.sv),
            ("h10", self.h10),
            ("h20", self.h20),
            ("h12", self.h12),
            ("h21", self.h21),
            ("n1", self.n1),
            ("n2", self.n2),
            ("a", self.a),
            ("b", self.b),
        ];
        all.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect()
    }
}

#[derive(Args)]
struct ModelArgs {
    /// Channel model (may instead come from --config)
    #[arg(value_enum)]
    model: Option<Model>,
    /// key = value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    params: ParamFlags,
    /// Outer correlation grid step, in (0, 0.2]
    #[arg(long, value_parser = parse_number)]
    grid: Option<f64>,
    /// Samples of the inner one-dimensional correlation sweeps
    #[arg(long)]
    fine: Option<usize>,
    /// mac-nf --db: sweep the whole correlation range instead of the reduced one
    #[arg(long)]
    full_range: bool,
}

impl ModelArgs {
    fn partial(&self, bound: Option<Bound>) -> Result<PartialConfig, CliError> {
        let base = match &self.config {
            Some(p) => PartialConfig::load(p)?,
            None => PartialConfig::default(),
        };
        Ok(base.overlay(PartialConfig {
            model: self.model,
            bound,
            params: self.params.to_map(),
            grid: self.grid,
            fine: self.fine,
            full_range: self.full_range.then_some(true),
        }))
    }
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    which: BoundFlags,
    /// Output file (stdout when omitted); a `.meta.json` sidecar is written next to it
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Report the upper concave envelope instead of the raw union
    #[arg(long)]
    convexify: bool,
    /// Rates in nats instead of bits
    #[arg(long)]
    nats: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Config file for region A
    a: PathBuf,
    /// Config file for region B
    b: PathBuf,
    /// Tolerance in bits
    #[arg(long, default_value = "1e-9", value_parser = parse_number)]
    tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value = "0", value_parser = parse_number)]
    h_min: f64,
    #[arg(long, default_value = "3", value_parser = parse_number)]
    h_max: f64,
    #[arg(long, default_value = "0.05", value_parser = parse_number)]
    step: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Draws per suite
    #[arg(long, short, default_value_t = 1000)]
    n: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn from_core(e: dbbound::Error) -> Self {
        use dbbound::Error as E;
        match e {
            E::InvalidParams { field, value, reason } => {
                CliError::Config(format!("{}: {value} {reason}", config::flag_for_field(field)))
            }
            E::InvalidGrid(msg) => CliError::Config(msg.to_string()),
            E::InvalidCorrelation { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("DBBOUND_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| CliError::Config(format!("DBBOUND_THREADS: `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    init_threads()?;
    match cli.command {
        Command::Bound(args) => {
            let cfg = args.model.partial(args.which.selected())?.resolve(true)?;
            let opts = BoundOptions {
                output: args.output,
                format: args.format,
                convexify: args.convexify,
                nats: args.nats,
            };
            commands::cmd_bound(&cfg, &opts)?;
            Ok(true)
        }
        Command::Compare(args) => {
            let a = PartialConfig::load(&args.a)?.resolve(true)?;
            let b = PartialConfig::load(&args.b)?.resolve(true)?;
            if !(args.tol >= 0.0) {
                return Err(CliError::Config(format!("tol: {} must be >= 0", args.tol)));
            }
            let report = commands::compare(&a, &b, args.tol, (&args.a, &args.b))?;
            eprintln!("{}: max gap {:.6e} bits at R1 = {:.6}", report.relation, report.max_gap, report.max_gap_r1);
            let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            match &args.output {
                Some(p) => output::write_atomic(p, body.as_bytes())?,
                None => print!("{body}"),
            }
            Ok(report.a_subset_b)
        }
        Command::SweepH(args) => {
            let mut partial = args.model.partial(None)?;
            if let Some(k) = ["h12", "h21"].iter().find(|k| partial.params.contains_key(*k)) {
                eprintln!("note: {k} is replaced by the swept h");
            }
            partial.params.remove("h12");
            partial.params.remove("h21");
            let cfg = partial.resolve(false)?;
            let hs = commands::h_values(args.h_min, args.h_max, args.step)?;
            commands::cmd_sweep_h(&cfg, &hs, args.output.as_deref())?;
            Ok(true)
        }
        Command::Verify(args) => commands::cmd_verify(args.seed, args.n, args.output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dbbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
