use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Tracefree SL(2,C) representations of Montesinos links.
#[derive(Debug, Parser)]
#[command(name = "montrep", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate conjugacy classes of representations, case by case.
    Enum(EnumArgs),
    /// Verify classes at the crossing level, from a link spec or a saved JSON file.
    Verify(VerifyArgs),
    /// Scan the case (v) closure residual over theta in [0, 2 pi).
    Scan(ScanArgs),
    /// End matrices of a tangle expression from a generating pair.
    TangleEnds(TangleEndsArgs),
    /// Count the components of a Montesinos link.
    Components(ComponentsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dedupe {
    /// Merge classes of one case whose character vectors agree.
    Characters,
}

#[derive(Debug, Args)]
pub struct EnumOpts {
    /// Cases to run, by numeral or name (i,ii,iii,iv,v).
    #[arg(long, value_delimiter = ',', default_value = "i,ii,iii,iv,v")]
    pub cases: Vec<String>,
    /// Verification tolerance.
    #[arg(long, env = "MONTREP_TOL", default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of lambda samples for case (iii).
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Seed of the lambda sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Values of a for case (iv), e.g. `0.5,2+1i,-3`.
    #[arg(long = "a", value_delimiter = ',', allow_hyphen_values = true)]
    pub a_values: Vec<String>,
    #[arg(long, value_enum)]
    pub dedupe: Option<Dedupe>,
    /// Also write the JSON document to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    /// Link spec, e.g. `M(2/1,3/1,7/1)`.
    pub spec: String,
    #[command(flatten)]
    pub opts: EnumOpts,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Link spec to enumerate and verify (omit with --from-json).
    #[arg(required_unless_present = "from_json", conflicts_with = "from_json")]
    pub spec: Option<String>,
    /// A document written by `enum`.
    #[arg(long)]
    pub from_json: Option<PathBuf>,
    #[command(flatten)]
    pub opts: EnumOpts,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub spec: String,
    /// Number of equally spaced theta values.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(3..))]
    pub grid: u64,
    /// Fixed n_1..n_r; by default every tuple with 0 <= n_l < p_l is scanned.
    #[arg(long = "n", value_delimiter = ',')]
    pub n_list: Option<Vec<i64>>,
    /// Refined minima below this are reported as roots.
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    /// Print only the minima, not the residual table.
    #[arg(long)]
    pub no_table: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TangleEndsArgs {
    /// Tangle expression, e.g. `[2]*[1/3]`, `[[2,-1,3]]` or `[7/3]`.
    pub expr: String,
    /// `s` with `s + 1/s = -tr(XY)`.
    #[arg(long, default_value = "0.6+0.8i", allow_hyphen_values = true)]
    pub s: String,
    /// `X = A(x)` and `Y = A(x s)`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ComponentsArgs {
    pub spec: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
