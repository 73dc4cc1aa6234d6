//! Command line driver: spectrum estimation, value region export, twist
//! walks, reference tables, and the self-check battery.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{ConfigError, RunConfig};
use num_complex::Complex64;
use output::{AnalyticTwist, Provenance};
use qcmeans::pick::PickRegion;
use qcmeans::spectrum::{
    beta_estimate, classify_integrability, BetaEstimate, ReferenceSpectra, SpectrumError,
};
use qcmeans::twist::{dim_bound, gamma_max, spiral_exponent, TwistError};
use qcmeans::verify::run_all;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "qcmeans",
    version,
    about = "Integral means spectra, value regions, and boundary twisting of conformal maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the integral means spectrum over an exponent grid.
    Beta(RunArgs),
    /// Emit the boundary of the logarithmic derivative value region.
    Region(RegionArgs),
    /// Estimate the twisting exponent at one boundary point.
    Twist(TaskArgs),
    /// Tabulate the reference spectrum bounds over an exponent grid.
    Spectra(TaskArgs),
    /// Run the named self-check battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for the exponent grid (0 uses the library default).
    #[arg(long, default_value_t = 0)]
    jobs: usize,

    /// Override the config seed recorded in the provenance header.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TaskArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the config seed recorded in the provenance header.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RegionArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Table of boundary points, or a standalone vector image.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Also write the report to a file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("verification failed: {failed} of {total} checks")]
    Verification { failed: usize, total: usize },

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
            CliError::Verification { .. } => 1,
        }
    }
}

/// Invalid inputs trace back to the config file; everything else is a
/// genuine runtime failure.
fn spectrum_error(error: SpectrumError) -> CliError {
    match error {
        SpectrumError::InvalidInput(message) => {
            ConfigError::Invalid(message.to_string()).into()
        }
        other => CliError::Numerical(other.to_string()),
    }
}

fn twist_error(error: TwistError) -> CliError {
    match error {
        TwistError::InvalidInput(message) => ConfigError::Invalid(message.to_string()).into(),
        other => CliError::Numerical(other.to_string()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Beta(args) => beta_command(args),
        Command::Region(args) => region_command(args),
        Command::Twist(args) => twist_command(args),
        Command::Spectra(args) => spectra_command(args),
        Command::Verify(args) => verify_command(args),
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn beta_command(args: RunArgs) -> Result<(), CliError> {
    let (config, sha) = RunConfig::load(&args.config)?;
    let map_config = config.require_map()?;
    let map = map_config.disk_map()?;
    let exponents = config.require_grid()?;
    let schedule = config.schedule.to_schedule()?;
    let tail = config.schedule.tail_length;
    let tol = config.tolerances.quadrature;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let estimates: Vec<(Complex64, BetaEstimate)> = pool
        .install(|| {
            exponents
                .par_iter()
                .map(|t| beta_estimate(map.as_ref(), schedule, *t, tol, tail).map(|e| (*t, e)))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(spectrum_error)?;

    let k = map.distortion_k().ok();
    let provenance = Provenance {
        command: "beta",
        config_sha256: sha,
        seed: args.seed.unwrap_or(config.seed),
        map: map_config.describe(),
    };
    let text = output::beta_csv(&provenance, &estimates, |t| {
        k.and_then(|k| ReferenceSpectra::evaluate(k, t).ok())
    });
    write_out(args.out.as_deref(), &text)
}

fn region_command(args: RegionArgs) -> Result<(), CliError> {
    let (config, sha) = RunConfig::load(&args.config)?;
    let region_config = config
        .region
        .ok_or_else(|| ConfigError::Invalid("this command needs a \"region\" section".into()))?;
    let region = PickRegion::new(region_config.k)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let polyline = region
        .boundary_polyline(region_config.n)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let provenance = Provenance {
        command: "region",
        config_sha256: sha,
        seed: config.seed,
        map: format!("value region at k = {}", region.k()),
    };
    let text = match args.format {
        Format::Csv => output::region_csv(&provenance, &region, &polyline),
        Format::Svg => output::region_svg(&region, &polyline),
    };
    write_out(args.out.as_deref(), &text)
}

fn twist_command(args: TaskArgs) -> Result<(), CliError> {
    let (config, sha) = RunConfig::load(&args.config)?;
    let map_config = config.require_map()?;
    let map = map_config.disk_map()?;
    let twist_config = config
        .twist
        .ok_or_else(|| ConfigError::Invalid("this command needs a \"twist\" section".into()))?;

    let report = spiral_exponent(map.as_ref(), twist_config.zeta(), twist_config.j_max)
        .map_err(twist_error)?;

    let analytic = match map_config.power_params()? {
        Some(params) => match params.distortion_k() {
            Ok(k) => {
                let gamma = params.alpha_gamma().1;
                let extremal = gamma_max(k).map_err(twist_error)?;
                let bound = dim_bound(gamma, k).map_err(twist_error)?;
                Some(AnalyticTwist {
                    k,
                    gamma,
                    gamma_max: extremal,
                    dim_bound: bound,
                })
            }
            Err(_) => None,
        },
        None => None,
    };

    let provenance = Provenance {
        command: "twist",
        config_sha256: sha,
        seed: args.seed.unwrap_or(config.seed),
        map: map_config.describe(),
    };
    let text = output::twist_csv(&provenance, &report, analytic);
    write_out(args.out.as_deref(), &text)
}

fn spectra_command(args: TaskArgs) -> Result<(), CliError> {
    let (config, sha) = RunConfig::load(&args.config)?;
    let spectra_config = config
        .spectra
        .ok_or_else(|| ConfigError::Invalid("this command needs a \"spectra\" section".into()))?;
    let exponents = config.require_grid()?;
    let rows = exponents
        .iter()
        .map(|t| {
            let reference = ReferenceSpectra::evaluate(spectra_config.k, *t)?;
            let class = classify_integrability(spectra_config.k, *t)?;
            Ok((reference, class))
        })
        .collect::<Result<Vec<_>, SpectrumError>>()
        .map_err(spectrum_error)?;

    let provenance = Provenance {
        command: "spectra",
        config_sha256: sha,
        seed: args.seed.unwrap_or(config.seed),
        map: format!("reference bounds at k = {}", spectra_config.k),
    };
    let text = output::spectra_csv(&provenance, &rows);
    write_out(args.out.as_deref(), &text)
}

fn verify_command(args: VerifyArgs) -> Result<(), CliError> {
    let report = run_all(args.seed);
    let text = output::verify_text(&report);
    print!("{text}");
    if let Some(path) = &args.out {
        std::fs::write(path, &text)?;
    }
    let failed = report.failures().len();
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: report.results.len(),
        });
    }
    Ok(())
}
