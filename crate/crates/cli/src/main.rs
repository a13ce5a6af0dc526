//! `diplab`: simulate diploid genomes, sample reads, compute repeat
//! statistics, assemble, check reconstruction conditions, derive coverage
//! requirements and run the counterexample suite.
//!
//! Exit codes: 0 on success, 1 on assembly failure, 2 on usage or input
//! errors.

mod commands;
mod pool;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "diplab", version, about = "Diploid genome assembly laboratory")]
pub struct Cli {
    /// Worker threads for grid and suite commands (0 = all cores).
    #[arg(long, global = true, env = "DIPLAB_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Log more to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate a diploid genome and write it as a two-record FASTA file.
    Simulate(SimulateArgs),
    /// Sample error-free reads from a genome.
    Sample(SampleArgs),
    /// Compute the repeat summary row (CSV) and optionally the full profile.
    Stats(StatsArgs),
    /// Assemble reads and report the result.
    Assemble(AssembleArgs),
    /// Evaluate the reconstruction conditions of every algorithm on a genome
    /// and read set; prints JSON flags.
    Check(CheckArgs),
    /// Normalized-coverage feasibility curves from repeat statistics.
    Feasibility(FeasibilityArgs),
    /// Run constructed instances that violate a necessary condition.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Haplotype length (ignored with --base).
    #[arg(long, default_value_t = 1000)]
    pub length: usize,
    /// Probability that a position is heterozygous.
    #[arg(long, default_value_t = 0.001)]
    pub het_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Base haplotype to mutate instead of a random sequence (first record).
    #[arg(long)]
    pub base: Option<PathBuf>,
    /// Output genome file (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("amount").required(true).args(["count", "rate", "depth"]))]
pub struct SampleArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[arg(short = 'L', long)]
    pub read_length: usize,
    /// Number of reads, each from a uniform haplotype and start.
    #[arg(long)]
    pub count: Option<usize>,
    /// Poisson read-start rate per position per haplotype.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Target depth; samples ceil(depth * 2|H| / L) uniform reads.
    #[arg(long)]
    pub depth: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Omit `hap=` and `start=` annotations.
    #[arg(long)]
    pub no_provenance: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub genome: PathBuf,
    /// Stats CSV (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the full repeat profile as JSON. This enumerates every
    /// repeat pair and is meant for genomes of a few thousand bases.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Greedy,
    Dbg,
    Overlap,
}

#[derive(Args, Debug)]
pub struct AssembleArgs {
    #[arg(long)]
    pub reads: PathBuf,
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// k-mer length for the de Bruijn algorithm.
    #[arg(short, long)]
    pub k: Option<usize>,
    /// Smallest overlap that makes an overlap-graph edge.
    #[arg(long, default_value_t = 1)]
    pub min_overlap: usize,
    /// Keep every optimal walk (up to 64) in the report.
    #[arg(long)]
    pub all_optima: bool,
    /// Collapse identical read strings before building the overlap graph.
    #[arg(long)]
    pub distinct: bool,
    /// Largest overlap graph the exact walk search accepts.
    #[arg(long, default_value_t = 24)]
    pub max_vertices: usize,
    /// Ground-truth genome; adds condition flags and an equivalence verdict.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Assembled haplotypes (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Condensed de Bruijn graph (adjacency text) or reduced overlap graph
    /// (weighted edge list).
    #[arg(long)]
    pub emit_graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub genome: PathBuf,
    #[arg(long)]
    pub reads: PathBuf,
    /// k for the de Bruijn conditions; skipped when omitted.
    #[arg(short, long)]
    pub k: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["stats", "profile"]))]
pub struct FeasibilityArgs {
    /// Stats CSV as written by `stats`.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Full repeat profile JSON as written by `stats --profile`.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Row of the stats CSV used for the curves.
    #[arg(long, default_value_t = 0)]
    pub row: usize,
    /// Allowed failure probability.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long = "L-min", default_value_t = 1000)]
    pub l_min: usize,
    #[arg(long = "L-max", default_value_t = 50_000)]
    pub l_max: usize,
    #[arg(long = "L-step", default_value_t = 500)]
    pub l_step: usize,
    /// Feasibility CSV (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Summary thresholds as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Every read-count term per read length as JSON.
    #[arg(long)]
    pub breakdown: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("which").required(true).args(["figure", "all", "list"]))]
pub struct VerifyArgs {
    /// Instance name.
    #[arg(long)]
    pub figure: Option<String>,
    #[arg(long)]
    pub all: bool,
    /// Print the instance names.
    #[arg(long)]
    pub list: bool,
    /// Pass/fail table as CSV (stdout when omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    let threads = pool::resolve_threads(cli.threads);
    match commands::run(cli.command, threads) {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
