use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use proprep_core::{parse_rational, DEFAULT_ENUMERATION_CAP};

/// Environment variable holding the default enumeration cap.
pub const CAP_ENV: &str = "PROPREP_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "proprep",
    version,
    about = "Proportional committee selection and exact fairness audits"
)]
pub struct Cli {
    /// Output format for reports and tables.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance file.
    Gen(GenArgs),
    /// Run a selection rule on an instance and write the committee.
    Select(SelectArgs),
    /// Measure one definition for a committee.
    Audit(AuditArgs),
    /// Run a grid of instances, rules and audits from a TOML spec.
    Sweep(SweepArgs),
    /// Count neighborhood events of both rules on growing random instances.
    Bench(BenchArgs),
}

pub fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `A..B`, inclusive on both ends.
pub fn t_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad bound `{x}` in `{s}`"))
    };
    Ok((parse(a)?, parse(b)?))
}

/// `NxM`.
pub fn size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad size `{x}` in `{s}`"))
    };
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Destination file; stdout when omitted.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Two far-apart clusters, voters and candidates paired (k = 2⌈2α⌉−1).
    TwoCluster {
        #[arg(long, value_parser = rational)]
        alpha: BigRational,
        /// Distance between the clusters.
        #[arg(long, value_parser = rational, default_value = "1000")]
        cross: BigRational,
    },
    /// k+1 one-site clusters with k = 1/(α−1).
    Diverging {
        #[arg(long, value_parser = rational)]
        alpha: BigRational,
        #[arg(long, value_parser = rational, default_value = "1")]
        cross: BigRational,
    },
    /// k+1 one-site clusters of near-equal size, k ≤ n/4.
    Refined {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// The six-voter ordinal/cardinal separation election, with rankings.
    Separation {
        #[arg(long, value_parser = rational, default_value = "1/100")]
        eps: BigRational,
        /// Which of c1..c3 the metric is built against (1-based).
        #[arg(long, default_value_t = 1)]
        chosen: usize,
    },
    /// Uniform integer lattice points.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// l1, linf or euclidean.
        #[arg(long, default_value = "l1")]
        norm: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Store only the voter/candidate distances.
        #[arg(long)]
        block: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Ear,
    Tgc,
    SingleWinner,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(value_enum)]
    pub rule: Rule,
    #[arg(long)]
    pub instance: PathBuf,
    /// Committee size; defaults to the instance's k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Write the coverage record here.
    #[arg(long)]
    pub emit_coverage: Option<PathBuf>,
    /// Committee file destination; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Pf,
    Core,
    Pr,
    PrStrong,
    CorSingle,
    Stability,
    Distortion,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Committee file; taken from the coverage record when omitted.
    #[arg(long)]
    pub committee: Option<PathBuf>,
    /// Coverage record; required for cor-single and stability.
    #[arg(long)]
    pub coverage: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub check: CheckArg,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub alpha: BigRational,
    /// Inclusive subcommittee sizes for pr and pr-strong, e.g. 1..3.
    #[arg(long, value_parser = t_range)]
    pub t_range: Option<(usize, usize)>,
    /// Largest voter count for coalition enumeration.
    #[arg(long, env = CAP_ENV, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
    /// Sample this many coalitions instead of enumerating (lower bound only).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rule that produced the committee; attaches its guarantee to the report.
    #[arg(long, value_enum)]
    pub rule: Option<Rule>,
    /// Override the instance's k.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Overrides the spec's output directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated NxM sizes.
    #[arg(long, value_delimiter = ',', value_parser = size, default_value = "100x20,200x20,400x20")]
    pub sizes: Vec<(usize, usize)>,
    /// Committee size; defaults to min(5, m−1).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
