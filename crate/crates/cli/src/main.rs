//! Command-line front end for the wireless secret-sharing game.
//!
//! Exit codes are a stable contract: 0 on success, 1 on domain or
//! validation failures, 2 on usage and parse errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact big-rational arithmetic from decimal strings.
    Rational,
    /// IEEE f64 arithmetic with a strictness margin.
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Path to the game config JSON.
    #[arg(long)]
    pub config: PathBuf,
    /// Numeric mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Rational)]
    pub mode: ModeArg,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Legitimate users' strategy: `Split`, `alice:N`, `bob:N`, or
    /// `mixed:w0,w1,...` with one weight per strategy column.
    #[arg(long)]
    pub legit: String,
    /// Eve's strategy: `near-alice`, `middle`, `near-bob`, or
    /// `mixed:p1,p2,p3`.
    #[arg(long)]
    pub eve: String,
    /// Number of Monte Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// PRNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exchange random payloads and compare XOR secrets instead of counting
    /// success indicators.
    #[arg(long)]
    pub payload_mode: bool,
    /// Payload size in bits for payload mode.
    #[arg(long, default_value_t = 32)]
    pub payload_bits: u32,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Which probability to sweep: `triple_a.p_near`, `triple_a.p_mid`,
    /// `triple_a.p_far`, or the `triple_b` counterparts.
    #[arg(long)]
    pub param: String,
    /// Grid start (decimal string, inclusive).
    #[arg(long)]
    pub from: String,
    /// Grid end (decimal string, inclusive).
    #[arg(long)]
    pub to: String,
    /// Number of grid points.
    #[arg(long, default_value_t = 11)]
    pub steps: u32,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check both channel triples against the admissibility conditions.
    Validate(CommonArgs),
    /// Classify the game, list pure equilibria, and compute a mixed one.
    Solve(CommonArgs),
    /// Estimate a profile's capture probability by seeded simulation.
    Simulate(SimulateArgs),
    /// Re-solve the game over a grid of one channel parameter.
    Sweep(SweepArgs),
    /// Reproduce the published numerical example, diffing recomputed
    /// figures against the printed ones.
    #[command(name = "repro-paper-example")]
    ReproPaperExample(ReproArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "wss-game",
    version,
    about = "Wireless secret-sharing game: equilibrium solvers and packet-exchange simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Failures split by exit code: usage/parse problems exit 2, domain and
/// validation failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(args) => commands::validate::run(&args),
        Command::Solve(args) => commands::solve::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Sweep(args) => commands::sweep::run(&args),
        Command::ReproPaperExample(args) => commands::repro::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
