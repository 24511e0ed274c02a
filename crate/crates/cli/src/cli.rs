use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use photon_certify_core::IngestConfig;

use crate::commands::{self, OutputFormat};
use crate::error::CliResult;
use crate::formats::parse_alpha;

/// Certify single-photon sources from two-detector click statistics.
#[derive(Debug, Parser)]
#[command(name = "photon-certify", version)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Confidence bounds and p-value from a counts file.
    Analyze(AnalyzeArgs),
    /// Click counts (or exact probabilities) for a given source and apparatus.
    Simulate(SimulateArgs),
    /// Bin a time-tag file into click counts.
    Ingest(IngestArgs),
    /// Vertices of the benchmark polytopes, plus optional data points.
    Polytope(PolytopeArgs),
    /// Wigner-negativity bounds for a single-photon weight or a state.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
pub struct AnalyzeArgs {
    /// Counts JSON (`-` for standard input).
    #[arg(group = "input")]
    pub counts: Option<PathBuf>,
    /// Analyze every `.json` counts file in this directory.
    #[arg(long, group = "input")]
    pub batch: Option<PathBuf>,
    #[arg(long, default_value = "1e-10", value_parser = parse_alpha)]
    pub alpha: f64,
    /// Apparatus bounds JSON; enables the apparatus-dependent fields.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// `fock:n`, `lossy_single_photon:eta`, `vacuum`, inline JSON or a state file.
    #[arg(long)]
    pub state: String,
    /// Apparatus JSON, inline or as a file. Ideal balanced when omitted.
    #[arg(long)]
    pub apparatus: Option<String>,
    #[arg(short, long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact probabilities and benchmarks instead of sampled counts.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Time-tag file (`-` for standard input).
    pub input: PathBuf,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub window_ps: u64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub delay_r_ps: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub delay_t_ps: i64,
    #[arg(long, default_value_t = 0)]
    pub dead_ps: u64,
}

#[derive(Debug, Args)]
pub struct PolytopeArgs {
    /// Single-photon weights `P` of the polytopes.
    #[arg(long = "p", value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub levels: Vec<f64>,
    /// Counts files to place as data points.
    #[arg(long)]
    pub counts: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub p1: Option<f64>,
    /// Also integrate the exact negativity of this state.
    #[arg(long)]
    pub state: Option<String>,
}

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Analyze(a) => match (&a.counts, &a.batch) {
            (_, Some(dir)) => commands::analyze_batch(dir, a.alpha, a.bounds.as_deref(), a.format),
            (Some(counts), None) => {
                commands::analyze(counts, a.alpha, a.bounds.as_deref(), a.format)
            }
            (None, None) => unreachable!("clap requires an input"),
        },
        Command::Simulate(s) => {
            commands::simulate(&s.state, s.apparatus.as_deref(), s.n, s.seed, s.exact)
        }
        Command::Ingest(i) => commands::ingest(
            &i.input,
            &IngestConfig {
                window_ps: i.window_ps,
                delay_r_ps: i.delay_r_ps,
                delay_t_ps: i.delay_t_ps,
                dead_ps: i.dead_ps,
            },
        ),
        Command::Polytope(p) => commands::polytope(&p.levels, &p.counts),
        Command::Bound(b) => commands::bound(b.p1, b.state.as_deref()),
    }
}
