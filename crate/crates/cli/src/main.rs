//! `halfhc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use halfhc_core::{CodecChoice, SolverKind};

#[derive(Debug, Parser)]
#[command(name = "halfhc", version, about = "Half Huffman coding: codes, solvers, and matcher pipeline reports")]
pub struct Cli {
    /// Seed for every random draw made by the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build Hc and halfHc codes for a corpus and test the frequency of 1s.
    Analyze(AnalyzeArgs),
    /// Solve a selection instance read from JSON.
    Solve(SolveArgs),
    /// Compress a corpus, parse the bits with a matcher code, and score them against a channel.
    Pipeline(PipelineArgs),
    /// Find the dyadic pmf closest to the channel's target and print its matcher code.
    DyadicSearch(DyadicArgs),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value = "exhaustive")]
    pub solver: SolverKind,
    /// Bisection tolerance.
    #[arg(long, default_value_t = halfhc_core::perm_opt::DEFAULT_EPSILON)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// UTF-8 text corpus; one symbol per character.
    #[arg(required_unless_present = "weights", conflicts_with = "weights")]
    pub corpus: Option<PathBuf>,
    /// `symbol,weight` CSV used instead of a corpus; the empirical check then samples `--samples` symbols.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Codec whose table `--csv` writes.
    #[arg(long, default_value = "halfhc")]
    pub codec: CodecChoice,
    /// Confidence level of the Wald interval.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV code table path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON object with `a`, `b`, and optional `epsilon`.
    pub instance: PathBuf,
    #[arg(long, default_value = "exhaustive")]
    pub solver: SolverKind,
    /// Overrides the instance's `epsilon`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// UTF-8 text corpus.
    #[arg(required_unless_present = "fair_bits")]
    pub corpus: Option<PathBuf>,
    /// Channel JSON (`symbols`, `w`, `S`, `p_star`); the built-in three-symbol channel when absent.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Matcher JSON: list of `{codeword, symbol}`.
    #[arg(long, conflicts_with = "depth")]
    pub matcher: Option<PathBuf>,
    /// Build the matcher by dyadic search at this depth.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Restrict the report to one codec; both by default.
    #[arg(long)]
    pub codec: Option<CodecChoice>,
    /// Also parse this many seeded fair bits.
    #[arg(long)]
    pub fair_bits: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `variant,cost,kl` rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DyadicArgs {
    #[arg(long)]
    pub channel: Option<PathBuf>,
    #[arg(long, default_value_t = halfhc_core::matcher::DEFAULT_DEPTH)]
    pub depth: u32,
    /// Matcher JSON output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match commands::run(&cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
