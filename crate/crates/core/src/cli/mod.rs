//! Argument definitions and dispatch for the `padic-wavelet` binary.

mod commands;
mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

/// Environment variable overriding the qudit amplitude cap.
pub const AMPLITUDE_CAP_ENV: &str = "PADIC_AMPLITUDE_CAP";

#[derive(Debug, Parser)]
#[command(name = "padic-wavelet", version, about = "p-adic arithmetic, wavelets, hierarchic states and qudits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digit expansion, valuation and norm of a rational number.
    Expand(ExpandArgs),
    /// Haar pyramid of a CSV signal, written as JSON.
    Haar(HaarArgs),
    /// Signal reconstructed from a pyramid JSON file.
    HaarInv(HaarInvArgs),
    /// Checks the Vladimirov eigenrelation for the Kozyrev wavelet.
    Kozyrev(KozyrevArgs),
    /// Wavelet transform of a test function JSON file.
    Cwt(CwtArgs),
    /// Reconstruction from a coefficient grid JSON file.
    Icwt(IcwtArgs),
    /// Hierarchic states of two p-adic integers and their overlaps.
    HierDemo(HierDemoArgs),
    /// Runs a qudit circuit file.
    Qudit(QuditArgs),
    /// SVG of the recursive simplex partition.
    Simplex(SimplexArgs),
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// A rational such as `12`, `-1` or `1/3`.
    #[arg(allow_hyphen_values = true)]
    pub rational: String,
    #[arg(long)]
    pub p: u32,
    /// Number of digits after the leading one.
    #[arg(long, default_value_t = 8)]
    pub precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Real,
    Padic,
}

#[derive(Debug, Args)]
pub struct HaarArgs {
    /// CSV of samples; rationals such as `1/3` are allowed in p-adic mode.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Real)]
    pub mode: Mode,
    /// Number of levels; defaults to log2 of the signal length.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long, default_value_t = 16)]
    pub precision: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HaarInvArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct KozyrevArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Support exponent: functions vanish outside `p^(-K) Z_p`.
    #[arg(short = 'K', long, default_value_t = 1)]
    pub support: i32,
    /// Resolution exponent: functions are constant on cosets of `p^J Z_p`.
    #[arg(short = 'J', long, default_value_t = 3)]
    pub resolution: i32,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CwtArgs {
    /// Test function JSON `{p, K, J, entries}`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = -4)]
    pub jmin: i32,
    #[arg(long, default_value_t = 4)]
    pub jmax: i32,
    /// Working resolution exponent; defaults to the smallest exact one.
    #[arg(long)]
    pub resolution: Option<i32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IcwtArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Original function, for an L2 error report.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HierDemoArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Components per node.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value = "5", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value = "14", allow_hyphen_values = true)]
    pub y: String,
    #[arg(long, default_value_t = 16)]
    pub precision: usize,
    /// Writes the state of `x` as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuditArgs {
    /// Circuit file, one instruction per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub qudits: usize,
    /// Initial basis state as comma-separated digits, most significant first.
    #[arg(long, conflicts_with = "dna")]
    pub init: Option<String>,
    /// Initial basis state from a nucleotide string such as `AC-TG` (p = 5).
    #[arg(long)]
    pub dna: Option<String>,
    /// Rescale an unnormalized register before measuring instead of failing.
    #[arg(long)]
    pub renormalize: bool,
    /// Replaces the seed of every MEASURE line.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Writes the final amplitudes as a JSON array of `{re, im}`.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimplexArgs {
    /// Branching: 4 draws the triangle, other values the unit interval.
    #[arg(long, default_value_t = 4)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Address of the cell to highlight, e.g. `0,3`.
    #[arg(long)]
    pub highlight: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Expand(a) => commands::expand(&a),
        Command::Haar(a) => commands::haar(&a),
        Command::HaarInv(a) => commands::haar_inv(&a),
        Command::Kozyrev(a) => commands::kozyrev(&a),
        Command::Cwt(a) => commands::cwt(&a),
        Command::Icwt(a) => commands::icwt(&a),
        Command::HierDemo(a) => commands::hier_demo(&a),
        Command::Qudit(a) => commands::qudit(&a),
        Command::Simplex(a) => commands::simplex(&a),
    }
}
