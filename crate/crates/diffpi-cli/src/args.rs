use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffpi::ideals::PlanMode;

#[derive(Parser, Debug)]
#[command(name = "diffpi", version, about = "Exact differential codimensions, cocharacters and generating-set checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Differential codimensions c_n over a degree range.
    Codim(RunArgs),
    /// Cocharacter multiplicities over a degree range.
    Cochar(RunArgs),
    /// Sandwich check of a generating set: evaluation rank against the consequence bound.
    Verify(VerifyArgs),
    /// Dimension and bracket structure of the derivation algebra.
    Derspace(DerspaceArgs),
    /// Codimensions of truncated Grassmann algebras with inner derivations, until stable.
    GrassmannScan(ScanArgs),
    /// The built-in models.
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZooCommand {
    /// Every model with its dimension and operator algebra.
    List {
        /// Degree used to size the Grassmann truncations.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A model in the algebra JSON format.
    Export {
        #[command(flatten)]
        model: ModelArgs,
        /// Degree used to size a Grassmann truncation when --m is absent.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Built-in model name, e.g. ut2_delta, m1_D, grassmann, grassmann_der(9,2).
    #[arg(long, conflicts_with = "json", required_unless_present = "json")]
    pub model: Option<String>,
    /// Algebra in the JSON format instead of a built-in model.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Grassmann truncation (default 2n + t for each degree).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of inner derivations for grassmann_der.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Degree or inclusive range, e.g. 4 or 1..5.
    #[arg(long, value_parser = parse_range)]
    pub n: (usize, usize),
    /// Tuple plan; canonical is the default for Grassmann models, full otherwise.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<PlanMode>,
    /// Seed of the sampled plan.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report wall-clock milliseconds (otherwise the ms column is 0).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Generators separated by ';' (defaults to the model's registered set).
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DerspaceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Number of inner derivations (0 for the plain Grassmann algebra).
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, value_parser = parse_range)]
    pub n: (usize, usize),
    /// First truncation tried (default 2n + t).
    #[arg(long)]
    pub m_start: Option<usize>,
    /// Last truncation tried (default first + 4).
    #[arg(long)]
    pub m_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

fn parse_mode(s: &str) -> Result<PlanMode, String> {
    s.parse().map_err(|e: diffpi::Error| e.to_string())
}

/// `a`, `a..b` or `a..=b`, both ends inclusive.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree {t:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a == 0 || a > b {
        return Err(format!("degree range {s:?} must satisfy 1 ≤ a ≤ b"));
    }
    Ok((a, b))
}
