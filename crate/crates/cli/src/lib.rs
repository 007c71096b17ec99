//! Command-line front end for `decolab`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error.

pub mod output;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use decolab_core::sweep::{self, critical_points_p, critical_points_r, sweep_p, sweep_r};
use decolab_core::{ChannelKind, DeadZoneThreshold, Grid, SweepConfig};

use output::{GridMeta, OutputFormat, RunMetadata, Schema};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "DECOLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "decolab", version, about = "Coherence and entanglement of Werner states under local noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence and concurrence along the Werner line (no noise).
    Fig1(Fig1Args),
    /// Coherence and concurrence versus noise strength for one channel.
    Sweep(SweepArgs),
    /// Crossovers, death intervals and coherence zeros.
    Critical(CriticalArgs),
    /// Run the built-in property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonOut {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Omit the run timestamp so identical invocations give identical bytes.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = sweep::DEFAULT_COUNT)]
    pub count: usize,
    #[command(flatten)]
    pub out: CommonOut,
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    s.parse::<ChannelKind>().map_err(|e| {
        let ids: Vec<_> = ChannelKind::NOISE.iter().map(|k| k.id()).collect();
        format!("{e}; expected one of {}", ids.join(", "))
    })
}

/// `none` or one of the five channel identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelArg {
    None,
    Channel(ChannelKind),
}

fn parse_channel_arg(s: &str) -> Result<ChannelArg, String> {
    if s == "none" {
        Ok(ChannelArg::None)
    } else {
        parse_channel(s).map(ChannelArg::Channel)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_channel)]
    pub channel: ChannelKind,
    /// Werner parameters, comma separated. Defaults to 0.4,0.6,0.8,1.0.
    #[arg(long = "r", value_delimiter = ',', num_args = 1..)]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = sweep::DEFAULT_COUNT)]
    pub count: usize,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub stop: f64,
    #[command(flatten)]
    pub out: CommonOut,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    /// Channel identifier, or `none` for the crossover along the Werner line.
    #[arg(long, value_parser = parse_channel_arg)]
    pub channel: ChannelArg,
    #[arg(long = "r", default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = sweep::DEFAULT_COUNT)]
    pub count: usize,
    #[arg(long, default_value_t = sweep::DEFAULT_EPS_ZERO)]
    pub eps_zero: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 20240901)]
    pub seed: u64,
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<decolab_core::Error> for CliError {
    fn from(e: decolab_core::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

fn metadata(channel: &str, r_values: Vec<f64>, r_default: bool, grid: &Grid<f64>, eps: f64, stamp: bool) -> RunMetadata {
    RunMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        channel: channel.to_string(),
        r_values,
        r_values_default: r_default,
        both_qubits: true,
        grid: GridMeta {
            start: grid.start,
            stop: grid.stop,
            count: grid.count,
        },
        eps_zero: eps,
        timestamp: stamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    }
}

/// Writes to `path` or, when absent, to `stdout`. Write failures map to exit 2.
fn emit(
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    let err = |p: &PathBuf, e: io::Error| CliError::usage(format!("cannot write {}: {e}", p.display()));
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| err(p, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|_| w.flush()).map_err(|e| err(p, e))
        }
        None => f(stdout).map_err(|e| CliError::usage(format!("cannot write output: {e}"))),
    }
}

pub fn cmd_fig1(args: &Fig1Args, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = Grid::unit(args.count)?;
    let th = DeadZoneThreshold::default();
    let meta = metadata("none", vec![], false, &grid, th.value(), !args.out.no_timestamp);
    match args.out.format {
        OutputFormat::Csv => {
            let records = sweep_r(&grid)?;
            emit(args.out.out.as_ref(), stdout, |w| {
                output::write_records_csv(w, &meta, Schema::RSweep, &records)
            })
        }
        OutputFormat::Json => {
            let (records, cp) = critical_points_r(&grid, th)?;
            emit(args.out.out.as_ref(), stdout, |w| {
                output::write_json(w, &meta, Schema::RSweep, &records, output::critical_json(&cp))
            })
        }
    }
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = Grid::new(args.start, args.stop, args.count)?;
    let (r_values, r_default) = if args.r.is_empty() {
        (sweep::DEFAULT_R_VALUES.to_vec(), true)
    } else {
        (args.r.clone(), false)
    };
    let config = SweepConfig::new(Some(args.channel), r_values.clone(), grid)?;
    let th = DeadZoneThreshold::default();
    let meta = metadata(args.channel.id(), r_values.clone(), r_default, &grid, th.value(), !args.out.no_timestamp);
    match args.out.format {
        OutputFormat::Csv => {
            let records = sweep_p(&config)?;
            emit(args.out.out.as_ref(), stdout, |w| {
                output::write_records_csv(w, &meta, Schema::PSweep, &records)
            })
        }
        OutputFormat::Json => {
            let mut records = Vec::new();
            let mut per_r = Vec::new();
            for &r in &r_values {
                let (recs, cp) = critical_points_p(args.channel, r, &grid, true, th)?;
                records.extend(recs);
                per_r.push((r, cp));
            }
            emit(args.out.out.as_ref(), stdout, |w| {
                output::write_json(w, &meta, Schema::PSweep, &records, output::critical_by_r(&per_r))
            })
        }
    }
}

pub fn cmd_critical(args: &CriticalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let grid = Grid::unit(args.count)?;
    let th = DeadZoneThreshold::new(args.eps_zero)?;
    let stamp = !args.no_timestamp;
    let (meta, schema, records, cp) = match args.channel {
        ChannelArg::None => {
            let (records, cp) = critical_points_r(&grid, th)?;
            let meta = metadata("none", vec![], false, &grid, th.value(), stamp);
            (meta, Schema::RSweep, records, cp)
        }
        ChannelArg::Channel(kind) => {
            let (records, cp) = critical_points_p(kind, args.r, &grid, true, th)?;
            let meta = metadata(kind.id(), vec![args.r], false, &grid, th.value(), stamp);
            (meta, Schema::PSweep, records, cp)
        }
    };
    emit(args.out.as_ref(), stdout, |w| match args.format {
        OutputFormat::Json => output::write_json(w, &meta, schema, &records, output::critical_json(&cp)),
        OutputFormat::Csv => output::write_critical_csv(w, &meta, &cp),
    })
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let reports = verify::run_suite(args.seed);
    verify::print_table(stdout, &reports).map_err(|e| CliError::usage(e.to_string()))?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        writeln!(stdout, "all {} property groups passed", reports.len()).ok();
        Ok(true)
    } else {
        writeln!(stdout, "FAILED: {}", failed.join(", ")).ok();
        Ok(false)
    }
}

/// Reads the optional thread cap. Unset means the rayon default.
pub fn thread_cap(value: Option<String>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

/// Dispatches a parsed command and returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Fig1(a) => cmd_fig1(a, stdout).map(|_| EXIT_OK),
        Command::Sweep(a) => cmd_sweep(a, stdout).map(|_| EXIT_OK),
        Command::Critical(a) => cmd_critical(a, stdout).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(a, stdout).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            writeln!(stderr, "error: {}", e.message).ok();
            e.code
        }
    }
}

/// Runs `run` on a rayon pool sized by `DECOLAB_THREADS`.
pub fn run_with_env(cli: &Cli, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32 {
    let cap = match thread_cap(std::env::var(THREADS_ENV).ok()) {
        Ok(c) => c,
        Err(e) => {
            writeln!(stderr, "error: {}", e.message).ok();
            return e.code;
        }
    };
    match cap {
        None => run(cli, &mut *stdout, &mut *stderr),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli, &mut *stdout, &mut *stderr)),
            Err(e) => {
                writeln!(stderr, "error: cannot start thread pool: {e}").ok();
                EXIT_USAGE
            }
        },
    }
}
