use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use derangement_core::identities::IdentityId;
use derangement_core::sequences::SequenceKind;

#[derive(Debug, Parser)]
#[command(name = "degderange", version, about = "Degenerate derangement polynomials, identities and gamma checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout. Relative paths are resolved
    /// against $DEGDERANGE_OUT_DIR when it is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for verify and gamma-check batches (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a sequence for n = 0..=n_max.
    Table(TableArgs),
    /// Check identities over a (λ, x, r) grid.
    Verify(VerifyArgs),
    /// Prove one identity at fixed n by product-grid evaluation.
    Certify(CertifyArgs),
    /// Numerical checks of the degenerate gamma distribution.
    GammaCheck(GammaArgs),
    /// Draw samples from Γ_λ(1, 1).
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_parser = parse_kind)]
    pub sequence: SequenceKind,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    /// Polynomial argument (y for fubini).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Order of derangement-order.
    #[arg(long)]
    pub r: Option<usize>,
    /// Column of the Stirling tables.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated identity ids; all when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_identity)]
    pub identities: Vec<IdentityId>,
    #[arg(long, default_value_t = 32)]
    pub n_max: usize,
    /// Comma-separated λ grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1/2,-1/2,1/3,-1/3,2/7")]
    pub lambda: Vec<String>,
    /// Comma-separated x grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,-2,3/4")]
    pub x: Vec<String>,
    #[arg(long, default_value_t = 4)]
    pub r_max: usize,
    /// Negate the last summand of every verifier (negative control).
    #[arg(long)]
    pub mutate: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(value_parser = parse_identity)]
    pub identity: IdentityId,
    #[arg(long)]
    pub n: usize,
    /// Comma-separated λ points; n+1 default points when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Comma-separated x points; n+1 default points when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long)]
    pub mutate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaCheckKind {
    Thm11,
    Gammafn,
    Normalization,
    LogExpansion,
    Erlang,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[arg(value_enum)]
    pub check: GammaCheckKind,
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub lambda: String,
    /// Largest n (thm11, erlang).
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Order n of the log expansion.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Last term of the log expansion.
    #[arg(long, default_value_t = 30)]
    pub m_cap: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    /// Argument of Γ_λ(k).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Largest Erlang order.
    #[arg(long, default_value_t = 4)]
    pub r_max: usize,
    /// Comma-separated x grid for erlang.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,3/4")]
    pub x: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
}

fn parse_kind(s: &str) -> Result<SequenceKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e| format!("{e}"))
}
