use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coarse_ends::metric::{Family, MetricKind};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "coarse-ends",
    version,
    about = "Estimate sequential ends of sampled metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for randomized steps (metric triple sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Generate or load a sample and emit its points.
    Generate(SpaceArgs),
    /// Check the metric axioms on a sample.
    Validate(ValidateArgs),
    /// K-chain components of ball complements over a radius grid.
    Components(ComponentsArgs),
    /// Decide whether two sequences converge to the same end.
    SameEnd(PairArgs),
    /// Count ends across a K sweep.
    Sigma(SigmaArgs),
    /// Decide a pair and build an interleaved supersequence from the witnesses.
    Witness(PairArgs),
    /// Moduli of a scaling map and the end verdicts it induces.
    Induced(InducedArgs),
    /// Rerun the end count from several basepoints.
    BasepointCheck(BasepointArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Line,
    EuclideanN,
    TShape,
    TangentCircles,
    Comb,
    CsvImport,
}

impl From<SpaceKind> for Family {
    fn from(k: SpaceKind) -> Family {
        match k {
            SpaceKind::Line => Family::Line,
            SpaceKind::EuclideanN => Family::EuclideanN,
            SpaceKind::TShape => Family::TShape,
            SpaceKind::TangentCircles => Family::TangentCircles,
            SpaceKind::Comb => Family::Comb,
            SpaceKind::CsvImport => Family::CsvImport,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricArg {
    Euclidean,
    Max,
    ExplicitMatrix,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> MetricKind {
        match m {
            MetricArg::Euclidean => MetricKind::Euclidean,
            MetricArg::Max => MetricKind::Max,
            MetricArg::ExplicitMatrix => MetricKind::ExplicitMatrix,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceKind,
    /// Window radius around the basepoint.
    #[arg(long, default_value_t = 50.0)]
    pub window: f64,
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    /// Dimension for euclidean-n.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number of tangent circles; by default enough to leave the window.
    #[arg(long)]
    pub circles: Option<usize>,
    /// Point CSV for csv-import.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Distance matrix CSV for csv-import with the explicit-matrix metric.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,
    /// Basepoint id for csv-import.
    #[arg(long, default_value_t = 0)]
    pub basepoint: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Triangle checks above this count are sampled.
    #[arg(long, default_value_t = 1_000_000)]
    pub triples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ComponentsArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long = "k")]
    pub k: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long = "k-sweep", value_delimiter = ',', required = true)]
    pub k_sweep: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// First sequence: a fixture name or `ids:0,3,7,...`.
    #[arg(long)]
    pub s: String,
    /// Second sequence, same forms as `--s`.
    #[arg(long)]
    pub t: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SigmaArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Liveness margin; defaults to 2K per entry.
    #[arg(long)]
    pub live_margin: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InducedArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// The map multiplies coordinates by this factor; the codomain is the
    /// same family with its window scaled to fit.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Sequences whose verdict is compared before and after the map.
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BasepointArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Coordinates of an extra basepoint, e.g. `--at 0,4`; repeatable.
    #[arg(long = "at")]
    pub at: Vec<String>,
    #[arg(long)]
    pub live_margin: Option<f64>,
}
