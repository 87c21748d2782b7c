//! Argument definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::commands::{self, Outcome};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};
use crate::golden;

#[derive(Debug, Parser)]
#[command(
    name = "spinrigid",
    version,
    about = "Verifier for Killing spinors, eta invariants and asymptotic expansions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Seed for sampled points and fields.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Override the command's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Significant digits for floats in csv and pretty output.
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eta invariants, Rochlin residues and allowed signatures against the printed tables.
    Tables(TablesArgs),
    /// Exact element list of one group.
    Groups(GroupArgs),
    /// Dimensions of the spinors fixed by each spin lift.
    FixedSpinors(FixedSpinorArgs),
    /// Parallelism of Killing spinors for the Killing connection.
    KillingCheck(KillingArgs),
    /// Curvature of the Killing connection.
    CurvatureCheck(CurvatureArgs),
    /// Pointwise Lichnerowicz identity for random polynomial spinor fields.
    LichnerowiczCheck(LichnerowiczArgs),
    /// Vanishing certificate for the expansion of an Einstein metric.
    Fg(FgArgs),
    /// Decay of the mass integrand on slices near infinity.
    MassDecay(MassDecayArgs),
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Restrict to one group, e.g. `A:6`, `Dstar:5`, `Ostar`.
    #[arg(long)]
    pub group: Option<String>,
    /// Restrict to one character label, e.g. `k0`.
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub cyclic_min: usize,
    #[arg(long, default_value_t = 24)]
    pub cyclic_max: usize,
    #[arg(long, default_value_t = 2)]
    pub dihedral_min: usize,
    #[arg(long, default_value_t = 12)]
    pub dihedral_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub group: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FixedSpinorArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
pub struct KillingArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Largest Euclidean radius of sample points.
    #[arg(long, default_value_t = 0.9)]
    pub radius: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: Mode,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Chart {
    Hyperbolic,
    Flat,
    Perturbed,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.8)]
    pub radius: f64,
    #[arg(long, value_enum, default_value = "hyperbolic")]
    pub chart: Chart,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LichnerowiczArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.7)]
    pub radius: f64,
    #[arg(long, value_enum, default_value = "hyperbolic")]
    pub chart: Chart,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Ansatz {
    Frozen,
    Symmetric,
}

#[derive(Debug, Args)]
pub struct FgArgs {
    #[arg(long)]
    pub n: usize,
    /// Truncation order; defaults to `2n`.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value = "frozen")]
    pub ansatz: Ansatz,
    /// JSON file with free data to test against the certificate.
    #[arg(long, value_name = "FILE")]
    pub free_coeff: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Compliant,
    TraceViolating,
    Identity,
}

#[derive(Debug, Args)]
pub struct MassDecayArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub slices: usize,
    #[arg(long, value_enum, default_value = "compliant")]
    pub profile: Profile,
    #[arg(long, default_value_t = 0.02)]
    pub x_min: f64,
    #[arg(long, default_value_t = 0.2)]
    pub x_max: f64,
    /// Gauss nodes per polar angle (default depends on n).
    #[arg(long)]
    pub polar: Option<usize>,
    /// Gauss nodes in the azimuth (default depends on n).
    #[arg(long)]
    pub azimuth: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Tables(a) => &a.common,
            Command::Groups(a) => &a.common,
            Command::FixedSpinors(a) => &a.common,
            Command::KillingCheck(a) => &a.common,
            Command::CurvatureCheck(a) => &a.common,
            Command::LichnerowiczCheck(a) => &a.common,
            Command::Fg(a) => &a.common,
            Command::MassDecay(a) => &a.common,
        }
    }
}

/// Builds the config echo; `tol_default` is `None` for exact commands,
/// which then reject `--tol`.
pub fn run_config(
    common: &Common,
    tol_default: Option<f64>,
    params: Map<String, Value>,
) -> Result<RunConfig> {
    let tolerance = match (tol_default, common.tol) {
        (None, Some(_)) => {
            return Err(CliError::Usage(
                "--tol does not apply: this command uses exact arithmetic".into(),
            ))
        }
        (_, Some(t)) if !(t.is_finite() && t > 0.0) => {
            return Err(CliError::Usage(format!(
                "--tol must be positive and finite, got {t}"
            )))
        }
        (d, t) => t.or(d),
    };
    let golden = match std::env::var_os(golden::DATA_ENV) {
        Some(p) if !p.is_empty() => golden::GoldenSource::File(p.into()),
        _ => golden::GoldenSource::Bundled,
    };
    Ok(RunConfig {
        seed: common.seed,
        tolerance,
        tolerance_overridden: common.tol.is_some(),
        digits: common.digits,
        format: common.format,
        golden: golden.label(),
        params,
    })
}

pub fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Tables(a) => commands::tables(a),
        Command::Groups(a) => commands::groups(a),
        Command::FixedSpinors(a) => commands::fixed_spinors(a),
        Command::KillingCheck(a) => commands::killing_check(a),
        Command::CurvatureCheck(a) => commands::curvature_check(a),
        Command::LichnerowiczCheck(a) => commands::lichnerowicz_check(a),
        Command::Fg(a) => commands::fg(a),
        Command::MassDecay(a) => commands::mass_decay(a),
    }
}
