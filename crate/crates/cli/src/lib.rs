//! Command-line front end: volume tables, bound reports, parameter sweeps
//! and oracle verification runs.

use std::io::Write;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use sumrank_core::oracle::SearchBudget;
use sumrank_core::CodeParams;

pub mod render;
pub mod verify;

pub use verify::Formulas;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Default wall-clock cap per exhaustive search.
pub const DEFAULT_BUDGET_SECS: u64 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Verify(_) | CliError::Compute(_) | CliError::Io(_) => EXIT_VERIFY,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sumrank",
    version,
    about = "Covering codes in the sum-rank metric"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere and ball volumes for every radius.
    Volumes(SingleArgs),
    /// Every bound on the covering number, with the best bracket.
    Bounds(SingleArgs),
    /// Bound reports over a grid of parameters, as one table.
    Table(GridArgs),
    /// Formula-against-oracle checks for one parameter set.
    Verify(SingleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub eta: u32,
    #[arg(long)]
    pub ell: u32,
    /// Radius; with --rho-max, the first radius of the range.
    #[arg(long)]
    pub rho: Option<u32>,
    #[arg(long)]
    pub rho_max: Option<u32>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Comma-separated field sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eta: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<u32>,
    /// Radii to report; by default every radius strictly between 0 and the
    /// largest weight.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<u32>,
    /// Drops radii above this value.
    #[arg(long)]
    pub rho_max: Option<u32>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output format; tables default to csv, everything else to plain.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Largest space (in vectors) an exhaustive oracle may enumerate.
    #[arg(long, env = "SUMRANK_BUDGET_SPACE")]
    pub budget_space: Option<u64>,
    /// Wall-clock seconds allowed per exhaustive covering search.
    #[arg(long, env = "SUMRANK_BUDGET_SECS")]
    pub budget_secs: Option<u64>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Adds exhaustive and greedy covering searches to bound reports.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Volumes,
    Bounds,
    Table,
    Verify,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    /// One entry per parameter set, each with its radii in increasing order.
    pub points: Vec<(CodeParams, Vec<u32>)>,
    pub format: Format,
    pub budget: SearchBudget,
    pub seed: u64,
    pub oracle: bool,
}

fn make_params(q: u64, m: u32, eta: u32, ell: u32) -> Result<CodeParams, CliError> {
    CodeParams::new(q, m, eta, ell).map_err(|e| CliError::Usage(e.to_string()))
}

fn budget(common: &CommonArgs) -> Result<SearchBudget, CliError> {
    let mut b = SearchBudget::covering().with_time(Duration::from_secs(DEFAULT_BUDGET_SECS));
    if let Some(space) = common.budget_space {
        b = b.with_space(space);
    }
    if let Some(secs) = common.budget_secs {
        if secs == 0 {
            return Err(CliError::Usage("--budget-secs must be positive".into()));
        }
        b = b.with_time(Duration::from_secs(secs));
    }
    Ok(b)
}

/// Radii for a single-parameter command. Without flags, `volumes` and
/// `bounds` cover `[0, mu ell]` and `verify` the open range.
fn single_radii(
    args: &SingleArgs,
    params: &CodeParams,
    kind: CommandKind,
) -> Result<Vec<u32>, CliError> {
    let top = params.max_weight();
    let (lo, hi) = match (args.rho, args.rho_max) {
        (Some(r), None) => (r, r),
        (r, Some(h)) => (r.unwrap_or(0), h),
        (None, None) if kind == CommandKind::Verify => (1, top.saturating_sub(1)),
        (None, None) => (0, top),
    };
    if hi > top {
        return Err(CliError::Usage(format!(
            "rho = {hi} exceeds the largest weight {top}"
        )));
    }
    if lo > hi {
        return Err(CliError::Usage(format!("empty radius range {lo}..={hi}")));
    }
    Ok((lo..=hi).collect())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let (kind, args) = match cli.command {
            Command::Table(grid) => return Self::from_grid(grid),
            Command::Volumes(a) => (CommandKind::Volumes, a),
            Command::Bounds(a) => (CommandKind::Bounds, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        };
        let params = make_params(args.q, args.m, args.eta, args.ell)?;
        let radii = single_radii(&args, &params, kind)?;
        Ok(RunConfig {
            command: kind,
            points: vec![(params, radii)],
            format: args.common.format.unwrap_or(Format::Plain),
            budget: budget(&args.common)?,
            seed: args.common.seed,
            oracle: args.common.oracle,
        })
    }

    fn from_grid(grid: GridArgs) -> Result<Self, CliError> {
        let mut points = Vec::new();
        for &q in &grid.q {
            for &m in &grid.m {
                for &eta in &grid.eta {
                    for &ell in &grid.ell {
                        let params = make_params(q, m, eta, ell)?;
                        let top = params.max_weight();
                        let mut radii: Vec<u32> = if grid.rho.is_empty() {
                            (1..top).collect()
                        } else {
                            if let Some(&bad) = grid.rho.iter().find(|&&r| r > top) {
                                return Err(CliError::Usage(format!(
                                    "rho = {bad} exceeds the largest weight {top} of {params}"
                                )));
                            }
                            grid.rho.clone()
                        };
                        if let Some(h) = grid.rho_max {
                            radii.retain(|&r| r <= h);
                        }
                        radii.sort_unstable();
                        radii.dedup();
                        points.push((params, radii));
                    }
                }
            }
        }
        Ok(RunConfig {
            command: CommandKind::Table,
            points,
            format: grid.common.format.unwrap_or(Format::Csv),
            budget: budget(&grid.common)?,
            seed: grid.common.seed,
            oracle: grid.common.oracle,
        })
    }
}

pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    run_with(config, &Formulas::default(), out)
}

/// Like [`run`], with the formulas under test replaceable (for harness
/// self-tests of `verify`).
pub fn run_with(
    config: &RunConfig,
    formulas: &Formulas,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match config.command {
        CommandKind::Volumes => {
            let (params, _) = &config.points[0];
            render::volumes(params, config.format, out)
        }
        CommandKind::Bounds | CommandKind::Table => {
            let reports = render::reports(config)?;
            match config.format {
                Format::Json => render::reports_json(&reports, out),
                Format::Csv => render::reports_csv(&reports, config.oracle, out),
                Format::Plain => render::reports_plain(&reports, out),
            }
        }
        CommandKind::Verify => {
            let (params, radii) = &config.points[0];
            let outcome = verify::verify(params, radii, config, formulas);
            verify::render(&outcome, config, out)?;
            outcome.into_result()
        }
    }
}

/// Parses arguments, runs, and maps the outcome to an exit code. Usage
/// errors from argument parsing also exit with [`EXIT_USAGE`].
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| run(&config, out));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
