use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gul", version, about = "Counterexamples to uniqueness in sampled Gabor phase retrieval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a counterexample pair and write it to a directory.
    Construct(ConstructArgs),
    /// Certify magnitude agreement and distinctness of a stored pair.
    Verify(VerifyArgs),
    /// Tabulate |Gf| on a rectangular grid.
    Spectrogram(SpectrogramArgs),
    /// Search for non-constant F with |F| = 1 on a square lattice.
    Probe(ProbeArgs),
    /// Run the acceptance checks and print a PASS/FAIL table.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Base,
    Shifted,
    Perturb,
    Density,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").args(["hermite", "coeffs"])))]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Line spacing of the sampling family.
    #[arg(long, default_value_t = 0.25)]
    pub a: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Rotation of the line family.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long = "lambda0-re", default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda0_re: f64,
    #[arg(long = "lambda0-im", default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda0_im: f64,
    /// Use the Hermite function H_n (perturb: F = e_n).
    #[arg(long)]
    pub hermite: Option<u32>,
    /// Hermite coefficients, one `n re im` per line.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Lines n_min..=n_max recorded with the family are -lines..=lines.
    #[arg(long, default_value_t = 20)]
    pub lines: i64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.1)]
    pub xstep: f64,
    #[arg(long, default_value_t = -20, allow_negative_numbers = true)]
    pub nmin: i64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    pub nmax: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pair: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Agreement tolerance; defaults to 1e-10 (fast) or 1e-8 (oracle).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Integrate the Gabor transform directly instead of using the Fock images.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long = "dist-tol", default_value_t = 1e-8)]
    pub dist_tol: f64,
    /// Report directory; defaults to the pair directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Pgm,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("signal").args(["pair", "hermite"]).required(true)))]
pub struct SpectrogramArgs {
    #[arg(long)]
    pub pair: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    #[arg(long)]
    pub hermite: Option<u32>,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.05)]
    pub xstep: f64,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub wmin: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub wmax: f64,
    #[arg(long, default_value_t = 0.05)]
    pub wstep: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    /// Radius of the constraint disc.
    #[arg(long = "R", default_value_t = 3.0)]
    pub radius: f64,
    /// Highest basis index of the fitted function.
    #[arg(long = "N", default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "tol-feas", default_value_t = 1e-8)]
    pub tol_feas: f64,
    #[arg(long = "near-constant", default_value_t = 1e-4)]
    pub near_constant: f64,
    /// Run even when there are fewer constraints than unknowns.
    #[arg(long = "allow-underdetermined")]
    pub allow_underdetermined: bool,
    #[arg(long)]
    pub out: PathBuf,
}
