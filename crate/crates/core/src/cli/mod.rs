//! Command-line surface. Every command emits a report whose header carries
//! the tool version, the log convention and the fully resolved arguments.
//!
//! Exit status: 0 on success, 1 when a hard check fails or a computation is
//! refused, 2 on usage errors.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::verify::{DEFAULT_BIAS_MAX_H, DEFAULT_SUPPORT_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(name = "legendre-rip", version, about = "Legendre-symbol sensing matrices and exact verifiers")]
pub struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of the standard streams.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Plan M, H and the minimal prime from (N, K, delta).
    Plan(PlanArgs),
    /// Build a matrix and write it in RIPM v1 format.
    Gen(GenArgs),
    /// Run checks on a RIPM v1 matrix file.
    Verify(VerifyArgs),
    /// Bias of the seeded symbol stream on an index set.
    Bias(BiasArgs),
    /// Exact character sum against its square-root bound.
    Charsum(CharsumArgs),
    /// Exact RIP constants of deterministic matrices over a prime range.
    ScanConjecture(ScanArgs),
    /// Convert between CODE v1 generators and BSET v1 sign sets.
    CodeConvert(CodeConvertArgs),
    /// Orthogonal matching pursuit on one measurement vector.
    Recover(RecoverArgs),
    /// Recovery success rates over a sparsity range.
    Sweep(SweepArgs),
    /// Brute-force check of the matching-coloring identity.
    Matching(MatchingArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PlanArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub delta: f64,
    /// Override the planned row count.
    #[arg(long)]
    pub m: Option<u64>,
    /// Override the planned entropy.
    #[arg(long)]
    pub h: Option<u32>,
    #[arg(long, default_value_t = crate::construct::DEFAULT_C1)]
    pub c1: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub h: Option<u32>,
    /// Plan M and H from (N, K, delta) instead of giving them.
    #[arg(long, requires = "delta")]
    pub k: Option<u64>,
    #[arg(long, requires = "k")]
    pub delta: Option<f64>,
    /// Seed offset X in lowercase hex.
    #[arg(long, conflicts_with = "seed")]
    pub x: Option<String>,
    /// Draw X from this generator seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Symbols of 1..=MN with no seed.
    #[arg(long, conflicts_with_all = ["bernoulli", "x", "seed"])]
    pub deterministic: bool,
    /// Independent fair signs instead of symbols.
    #[arg(long, conflicts_with_all = ["x", "seed", "prime"])]
    pub bernoulli: bool,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Decimal prime or `auto` for the least admissible one.
    #[arg(long, default_value = "auto")]
    pub prime: String,
    /// Matrix destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Coherence,
    Rip,
    Fro,
    Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "coherence,rip,fro,provenance")]
    pub checks: Vec<Check>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Cap on supports or index-set pairs enumerated exhaustively.
    #[arg(long, default_value_t = DEFAULT_SUPPORT_BUDGET as u64)]
    pub budget: u64,
    /// Fail the rip check when delta exceeds this.
    #[arg(long)]
    pub target_delta: Option<f64>,
    /// Fail the fro check when theta exceeds this.
    #[arg(long)]
    pub target_theta: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BiasArgs {
    /// Decimal prime or `auto` for the least prime at least 2^H + max(MN, max I).
    #[arg(long, default_value = "auto")]
    pub prime: String,
    #[arg(long)]
    pub h: u32,
    /// 1-based offsets.
    #[arg(long, value_delimiter = ',', required = true)]
    pub index_set: Vec<u64>,
    /// Row count, used with --n-cols for the automatic prime.
    #[arg(long)]
    pub m: Option<u64>,
    /// Column count for the chain bound.
    #[arg(long)]
    pub n_cols: Option<u64>,
    /// Estimate from this many random seeds instead of enumerating.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long, default_value_t = DEFAULT_BIAS_MAX_H)]
    pub max_h: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct CharsumArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub offsets: Vec<u64>,
    #[arg(long)]
    pub t: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Primes in `LO:HI` (inclusive).
    #[arg(long, conflicts_with = "first")]
    pub primes: Option<String>,
    /// The smallest COUNT primes above MN.
    #[arg(long)]
    pub first: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub target_delta: f64,
    /// Bernoulli baselines with generator seeds 0..COUNT.
    #[arg(long, default_value_t = 20)]
    pub baseline_seeds: u64,
    #[arg(long, default_value_t = DEFAULT_SUPPORT_BUDGET as u64)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CodeConvertArgs {
    /// A CODE v1 or BSET v1 file; the direction follows from its header.
    #[arg(long)]
    pub input: PathBuf,
    /// Weight-window width for CODE input, as `a/b` or a decimal; defaults
    /// to the certified value.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RecoverArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Ground-truth sparse signal as `index:value` pairs (0-based).
    #[arg(long, value_delimiter = ',', conflicts_with = "y")]
    pub signal: Vec<String>,
    /// Measurement vector, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Vec<f64>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub noise_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleArg {
    LegendreDeterministic,
    LegendreSeeded,
    Bernoulli,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub ensemble: EnsembleArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Sparsities as `LO:HI` (inclusive).
    #[arg(long)]
    pub k_range: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Prime for the deterministic ensemble.
    #[arg(long)]
    pub prime: Option<String>,
    /// Entropy for the seeded ensemble.
    #[arg(long, default_value_t = 16)]
    pub h: u32,
    /// Table destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MatchingArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub colors: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::InvalidArgument(_)) => EXIT_USAGE,
                _ => match e.downcast_ref::<commands::UsageError>() {
                    Some(_) => EXIT_USAGE,
                    None => EXIT_FAILURE,
                },
            }
        }
    }
}
