use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lame_spectral::Formula;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "lame-spectral",
    version,
    about = "Van Vleck spectra and their limiting root density"
)]
pub struct Cli {
    /// Worker threads for grid evaluations (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Van Vleck roots t as CSV
    Spectrum(SpectrumArgs),
    /// Limiting density on a grid as CSV
    Density(DensityArgs),
    /// Histogram of the roots against the limiting density
    Compare(CompareArgs),
    /// Run the identity checks and print a JSON report
    Verify(VerifyArgs),
    /// Roots of the spectral polynomial for a complex cubic
    Complex(ComplexArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CubicArgs {
    /// Roots of Q as e1,e2,e3 (any order)
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub roots: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub cubic: CubicArgs,

    /// Exponents a1,a2,a3 of the first-order term (not used with --n)
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.5,0.5,0.5",
        conflicts_with = "n"
    )]
    pub alpha: Vec<f64>,

    /// Polynomial degree; the output has m+1 rows
    #[arg(long, conflicts_with = "n")]
    pub m: Option<usize>,

    /// Elliptic degree of the Lamé equation; lists all families unless --kappa is set
    #[arg(long)]
    pub n: Option<usize>,

    /// Family selector such as 0.5,0,0 (requires --n)
    #[arg(long, value_delimiter = ',', requires = "n")]
    pub kappa: Option<Vec<f64>>,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    pub cubic: CubicArgs,

    /// Number of grid points over [e3, e1]
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,

    /// One of i, ii, iii, iv-closed, iv-integral
    #[arg(long, default_value = "iii")]
    #[serde(serialize_with = "as_tag")]
    pub formula: Formula,

    /// Half-width of the excluded neighborhood of e2, relative to e1 - e3
    #[arg(long, default_value_t = 1e-6)]
    pub exclude: f64,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub cubic: CubicArgs,

    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5,0.5")]
    pub alpha: Vec<f64>,

    /// Polynomial degree
    #[arg(long, default_value_t = 400)]
    pub m: usize,

    #[arg(long, default_value_t = 40)]
    pub bins: usize,

    /// Density grid size
    #[arg(long, default_value_t = 400)]
    pub grid: usize,

    #[arg(long, default_value = "iii")]
    #[serde(serialize_with = "as_tag")]
    pub formula: Formula,

    /// Histogram CSV path
    #[arg(long)]
    pub histogram: Option<PathBuf>,

    /// Density CSV path
    #[arg(long)]
    pub density: Option<PathBuf>,

    /// JSON report path (default: standard output)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub cubic: CubicArgs,

    #[arg(long, default_value_t = 1e-5)]
    pub heun_tol: f64,

    #[arg(long, default_value_t = 1e-8)]
    pub equivalence_tol: f64,

    #[arg(long, default_value_t = 1e-6)]
    pub normalization_tol: f64,

    #[arg(long, default_value_t = 1e-10)]
    pub indicial_tol: f64,

    #[arg(long, default_value_t = 1e-8)]
    pub residual_tol: f64,

    /// Random interior points for the Heun sweep
    #[arg(long, default_value_t = 50)]
    pub points: usize,

    /// Grid points for the formula sweep
    #[arg(long, default_value_t = 200)]
    pub grid: usize,

    /// Largest elliptic degree for the Lamé residuals
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ComplexArgs {
    /// Three complex roots such as 1,0,-0.5+1i; the second is moved to the origin
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub roots: Vec<String>,

    #[arg(long, value_delimiter = ',', default_value = "0.5,0.5,0.5")]
    pub alpha: Vec<f64>,

    /// Polynomial degree; the output has n+1 rows
    #[arg(long)]
    pub n: usize,

    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn as_tag<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.tag())
}
