//! `electrovac`: JSON reports for Reissner–Nordström classification,
//! residual verification and the variational criticality test.

mod commands;
mod report;
mod table;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable that overrides the default identity tolerance.
pub const TOL_ENV: &str = "ELECTROVAC_TOL";

#[derive(Debug, Parser)]
#[command(name = "electrovac", version, about = "Checks for static electro-vacuum data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime, horizon, photon spheres and their extremality.
    Classify(ClassifyArgs),
    /// Residuals of every equation tag on a radial grid.
    Verify(VerifyArgs),
    /// The functional, its first variation along a bump, and the Pohozaev identity.
    Functional(FunctionalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingArg {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Radial,
    Tangential,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Spatial dimension (at least 3).
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Mass parameter of the Reissner–Nordström family.
    #[arg(long, required_unless_present = "profile", allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Charge parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub q: f64,
    /// Cosmological constant of tabulated data.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Table with columns `r A V Emag [Psi]` instead of the closed-form family.
    #[arg(long, conflicts_with = "m")]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Identity tolerance; defaults to ELECTROVAC_TOL, else 1e-9 (closed form) or 1e-5 (tabulated).
    #[arg(long)]
    pub tol_identity: Option<f64>,
    /// Accepted change under quadrature panel doubling; defaults to 1e-8 (closed form) or 1e-5 (tabulated).
    #[arg(long)]
    pub tol_quadrature: Option<f64>,
    /// Criticality tolerance, scaled by the perturbation norm.
    #[arg(long, default_value_t = 1e-5)]
    pub tol_criticality: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Radius of the boundary slice for TE2, E4, NE2 and PEM4; defaults to the
    /// outermost photon sphere of closed-form data.
    #[arg(long)]
    pub boundary: Option<f64>,
    /// Grid size.
    #[arg(long)]
    pub grid_count: Option<usize>,
    #[arg(long)]
    pub grid_lo: Option<f64>,
    #[arg(long)]
    pub grid_hi: Option<f64>,
    #[arg(long, value_enum)]
    pub spacing: Option<SpacingArg>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FunctionalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Inner and outer radius of the annulus.
    #[arg(long, num_args = 2, value_names = ["R1", "R2"], required = true)]
    pub annulus: Vec<f64>,
    /// Bump center; defaults to the annulus midpoint.
    #[arg(long)]
    pub bump_center: Option<f64>,
    /// Bump half width; defaults to a quarter of the annulus width.
    #[arg(long)]
    pub bump_width: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub bump_scale: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    /// Quadrature panels.
    #[arg(long, default_value_t = 32)]
    pub panels: usize,
    #[command(flatten)]
    pub tol: ToleranceArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug)]
pub enum CliError {
    /// Flag values that parse but are invalid.
    Usage(String),
    /// Unreadable input, unwritable output, or data outside its domain.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<electrovac::Error> for CliError {
    fn from(e: electrovac::Error) -> Self {
        match e {
            electrovac::Error::Parameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// A rendered report and whether every check in it passed.
pub struct Outcome {
    pub json: String,
    pub text: String,
    pub passed: bool,
}

fn emit(outcome: &Outcome, out: &OutputArgs) -> Result<(), CliError> {
    let body = match out.format {
        Format::Json => &outcome.json,
        Format::Text => &outcome.text,
    };
    match &out.output {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let env_tol = std::env::var(TOL_ENV).ok();
    let (outcome, out) = match &cli.command {
        Command::Classify(a) => (commands::classify(a, env_tol.as_deref())?, &a.out),
        Command::Verify(a) => (commands::verify(a, env_tol.as_deref())?, &a.out),
        Command::Functional(a) => (commands::functional(a, env_tol.as_deref())?, &a.out),
    };
    emit(&outcome, out)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
