use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use localinv_core::{DimensionVector, MultiDegree};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "localinv",
    version,
    about = "Exact computations with trace invariants of locally conjugated endomorphisms",
    after_help = "Set LOCALINV_THREADS to cap the worker threads. Exit codes: 0 ok, 1 a verification failed, 2 usage or guard error."
)]
pub struct Cli {
    #[command(flatten)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
#[group(multiple = false)]
pub struct Format {
    /// Emit JSON (default).
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit a short human-readable report.
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List canonical trace monomials of a multidegree.
    Enumerate(EnumerateArgs),
    /// Evaluate a trace monomial exactly.
    Eval(EvalArgs),
    /// Compare invariant dimensions with trace-monomial spans.
    Verify(VerifyArgs),
    /// Hilbert series, rational reconstruction, pole check and degree bounds.
    Hilbert(HilbertArgs),
    /// Degree and girth bounds.
    Bounds(BoundsArgs),
    /// Contraction plan for a trace monomial.
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Local dimensions, e.g. 2,2.
    #[arg(long, value_parser = parse_dims, default_value = "2")]
    pub dims: DimensionVector,
    /// Multidegree, e.g. 1,1 (one entry per label).
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: MultiDegree,
    /// Number of labels; pads the multidegree with zeros.
    #[arg(long)]
    pub m: Option<usize>,
    /// Keep only position-connected monomials.
    #[arg(long)]
    pub connected: bool,
    /// Keep only monomials with girth s_i <= d_i^2.
    #[arg(long)]
    pub girth: bool,
    /// Keep only monomials with girth s_i <= binom(d_i + 1, 2) (every d_i <= 3).
    #[arg(long)]
    pub small_dim: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Trace monomial JSON file.
    #[arg(long)]
    pub monomial: PathBuf,
    /// JSON array of endomorphisms or simple endomorphisms; random inputs
    /// from --seed when omitted.
    #[arg(long)]
    pub inputs: Option<PathBuf>,
    /// Local dimensions for random inputs.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<DimensionVector>,
    /// Number of random inputs (defaults to the largest label).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Evaluate through a greedy contraction plan.
    #[arg(long)]
    pub plan: bool,
    /// Evaluate through a saved plan (output of `plan`).
    #[arg(long, conflicts_with = "plan")]
    pub plan_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimensionVector,
    /// Number of labels (copies for --centralizer).
    #[arg(long)]
    pub m: Option<usize>,
    /// Single multidegree to check.
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<MultiDegree>,
    /// Check every multidegree with m labels and total degree up to this.
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Compare span(rho) with the commutant of mu on V^{(x)m}.
    #[arg(long)]
    pub centralizer: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimensionVector,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Truncation order; when omitted it starts at 4 dim(V)^2 + 8 and
    /// doubles until reconstruction is conclusive (at most 4096).
    #[arg(long = "N")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimensionVector,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Also measure the degrees where new generators appear (m = 1), up
    /// to this degree.
    #[arg(long)]
    pub empirical: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub monomial: PathBuf,
    #[arg(long, value_parser = parse_dims)]
    pub dims: DimensionVector,
}

fn parse_dims(s: &str) -> Result<DimensionVector, String> {
    DimensionVector::parse(s).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> Result<MultiDegree, String> {
    MultiDegree::parse(s).map_err(|e| e.to_string())
}
