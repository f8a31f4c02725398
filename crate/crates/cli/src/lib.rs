//! Command-line front end: argument model, exit codes and dispatch.

pub mod commands;
pub mod format;
pub mod grid;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grid::GridSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNSTABLE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_SUITE_FAILURE: i32 = 4;

/// Bad user input detected by the front end itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation(pub String);

impl fmt::Display for Validation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Validation {}

#[derive(Debug, Parser)]
#[command(name = "qnet", version, about = "Commutator budgets and squeezing bounds for linear bosonic networks")]
pub struct Cli {
    /// Worker threads for sweeps and suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Budget, sum rules and steady state of a network spec.
    Analyze(AnalyzeArgs),
    /// Scenario sweep written as CSV.
    Sweep(SweepArgs),
    /// Three-mode separability boundary and Duan grid.
    Boundary(BoundaryArgs),
    /// Seeded acceptance-property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Input moments; defaults to the bath occupancies of the spec.
    #[arg(long)]
    pub inputs: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Two-mode squeezing power against 𝒢 and ξ.
    Fig1,
    /// Parametric bound against Δη.
    Fig2,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    /// VAR:START:STOP:COUNT[:log]; repeat for a product grid, first flag outermost.
    #[arg(long = "grid", required = true)]
    pub grids: Vec<GridSpec>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub g_script: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub n1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub n2: f64,
    /// `η₁ − η₂` when not swept.
    #[arg(long, default_value_t = 0.0)]
    pub delta_eta: f64,
    /// Fixes `η₂`; by default `Δη` is split as `η_i ∝ ±γ_i`.
    #[arg(long)]
    pub eta2: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoundaryArgs {
    /// n_o or n_m grids; repeat for a product grid.
    #[arg(long = "grid", required = true)]
    pub grids: Vec<GridSpec>,
    /// CSV of Duan verdicts.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON report; defaults to the CSV path with a `.json` extension.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub g_script: f64,
    #[arg(long, default_value_t = 0.5)]
    pub xi: f64,
    /// Beam-splitter drive; with --g-sq replaces --g-script/--xi.
    #[arg(long, requires = "g_sq")]
    pub g_bs: Option<f64>,
    #[arg(long, requires = "g_bs")]
    pub g_sq: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.01)]
    pub gamma_m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub n_o: f64,
    #[arg(long, default_value_t = 0.0)]
    pub n_m: f64,
    /// Uses this η_e for the boundary line instead of the computed one.
    #[arg(long)]
    pub eta_e: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = qnet::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Replaces every suite tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Writes the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for an error escaping a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<qnet::Error>() {
            return if e.is_instability() {
                EXIT_UNSTABLE
            } else {
                match e {
                    qnet::Error::InvalidSpec(_)
                    | qnet::Error::Dimension { .. }
                    | qnet::Error::Frame(_)
                    | qnet::Error::NotApplicable(_)
                    | qnet::Error::Singularity(_) => EXIT_VALIDATION,
                    _ => EXIT_ERROR,
                }
            };
        }
        if cause.is::<Validation>() || cause.is::<serde_json::Error>() {
            return EXIT_VALIDATION;
        }
    }
    EXIT_ERROR
}

/// Runs a parsed command inside a pool of `workers` threads and returns the
/// process exit code.
pub fn run(cli: Cli) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_ERROR;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Analyze(a) => commands::analyze::run(a),
        Command::Sweep(a) => commands::sweep::run(a),
        Command::Boundary(a) => commands::boundary::run(a),
        Command::Verify(a) => commands::verify::run(a),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs; usage errors map to the
/// validation exit code.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
