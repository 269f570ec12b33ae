use clap::{Args, Parser, Subcommand};
use eacc_cli::commands::{self, SimulationSettings};
use eacc_cli::grid::GridSpec;
use eacc_cli::output::{Format, OutputRecordSet};
use eacc_cli::verify::{self, VerifyReport};
use eacc_cli::CliError;
use eacc_core::experiment::{self, ErrorMethod};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Entanglement-assisted capacity of a depolarizing qubit channel:
/// closed-form curves, simulated coincidence experiments and oracle checks.
#[derive(Parser)]
#[command(name = "eacc", version)]
struct Cli {
    /// RNG seed for every simulation
    #[arg(long, global = true, default_value_t = experiment::DEFAULT_SEED)]
    seed: u64,

    /// Output format: csv or json
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    format: Format,

    /// Write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form capacity on a grid of depolarizing probabilities
    Capacity {
        /// min:max:steps, endpoints included
        #[arg(long, default_value = "0:1:101", value_parser = parse_grid)]
        grid: GridSpec,
    },
    /// One simulated coincidence-counting experiment
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Depolarizing probability applied by the channel
        #[arg(long, default_value_t = 0.0)]
        p_exp: f64,
    },
    /// Simulated experiments over a grid of channel noise
    Sweep {
        #[command(flatten)]
        sim: SimArgs,
        /// p_exp grid as min:max:steps, endpoints included
        #[arg(long, default_value = "0:1:21", value_parser = parse_grid)]
        grid: GridSpec,
    },
    /// Check closed forms against the density-matrix pipeline
    Verify {
        /// Grid points per axis
        #[arg(long, default_value_t = verify::DEFAULT_POINTS)]
        points: usize,
    },
}

#[derive(Args)]
struct SimArgs {
    /// Source visibility in [0, 1]
    #[arg(long, default_value_t = 0.94)]
    visibility: f64,
    /// Expected coincidences per input state over its four projections
    #[arg(long, default_value_t = experiment::DEFAULT_MEAN_COUNTS)]
    mean_counts: f64,
    /// Uncertainty propagation: delta or bootstrap
    #[arg(long, default_value = "delta", value_parser = parse_error_method)]
    error_method: ErrorMethod,
    /// Resamples for the bootstrap method
    #[arg(long, default_value_t = experiment::DEFAULT_BOOTSTRAP_RESAMPLES)]
    bootstrap_resamples: usize,
}

impl SimArgs {
    fn settings(&self, seed: u64) -> SimulationSettings {
        SimulationSettings {
            visibility: self.visibility,
            mean_counts: self.mean_counts,
            seed,
            error_method: self.error_method,
            bootstrap_resamples: self.bootstrap_resamples,
        }
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_error_method(s: &str) -> Result<ErrorMethod, String> {
    s.parse().map_err(|e: eacc_core::Error| e.to_string())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn flush(out: &mut dyn Write, path: Option<&Path>) -> Result<(), CliError> {
    out.flush().map_err(|source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    })
}

fn emit(set: &OutputRecordSet, cli: &Cli) -> Result<(), CliError> {
    let path = cli.output.as_deref();
    let mut out = open_output(path)?;
    set.write(cli.format, &mut out)
        .map_err(|e| match (e, path) {
            (CliError::Serialization(msg), Some(p)) => CliError::Io {
                path: p.to_path_buf(),
                source: io::Error::other(msg),
            },
            (e, _) => e,
        })?;
    flush(&mut out, path)
}

fn emit_report(report: &VerifyReport, cli: &Cli) -> Result<(), CliError> {
    let path = cli.output.as_deref();
    let mut out = open_output(path)?;
    let io_err = |source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    };
    match cli.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Serialization(e.to_string()))?;
            writeln!(out, "{text}").map_err(io_err)?;
        }
        Format::Csv => {
            for check in &report.checks {
                writeln!(out, "{check}").map_err(io_err)?;
            }
            writeln!(
                out,
                "{} ({} points per axis, tolerance {:e})",
                if report.passed() {
                    "all checks passed"
                } else {
                    "verification FAILED"
                },
                report.points,
                report.tolerance
            )
            .map_err(io_err)?;
        }
    }
    flush(&mut out, path)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Capacity { grid } => emit(&commands::capacity(grid)?, cli),
        Command::Simulate { sim, p_exp } => {
            emit(&commands::simulate(&sim.settings(cli.seed), *p_exp)?, cli)
        }
        Command::Sweep { sim, grid } => {
            let set = commands::sweep(&sim.settings(cli.seed), grid)?;
            emit(&set, cli)?;
            if set.failures.is_empty() {
                Ok(())
            } else {
                for f in &set.failures {
                    eprintln!(
                        "point {} (p_exp = {}) failed: {}",
                        f.index, f.p_exp, f.error
                    );
                }
                Err(CliError::Estimation(eacc_core::Error::Inconsistent(
                    format!("{} sweep point(s) failed", set.failures.len()),
                )))
            }
        }
        Command::Verify { points } => {
            let report = commands::verify(*points)?;
            emit_report(&report, cli)?;
            let result = match report.failures().next() {
                None => Ok(()),
                Some(first) => Err(CliError::Verification(format!(
                    "{} at {} (deviation {:e})",
                    first.name, first.worst_at, first.max_deviation
                ))),
            };
            result
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("eacc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
