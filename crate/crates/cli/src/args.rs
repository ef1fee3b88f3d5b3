//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "volstat", version, about = "Realized versus implied volatility statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Realized variance of a price series over non-overlapping windows.
    Rv(RvArgs),
    /// Realized-to-index variance ratios and their distribution fits.
    Ratio(RatioArgs),
    /// Two-sample KS distance between scaled realized variance and index².
    Compare(CompareArgs),
    /// Model-free implied variance from one or two option chain files.
    Vix(VixArgs),
    /// Simulate stochastic-variance paths.
    Simulate(SimulateArgs),
    /// Variance of realized variance against horizon.
    Varrv(VarrvArgs),
    /// Estimate (θ, γ, κ) from daily squared returns.
    Estimate(EstimateArgs),
    /// Regenerate a named table or figure dataset from the data directory.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesOpts {
    #[arg(long, default_value = "Date")]
    pub date_column: String,
    #[arg(long, default_value = "Close")]
    pub value_column: String,
    #[arg(long, value_enum, default_value_t = DateFormatArg::Iso)]
    pub date_format: DateFormatArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DateFormatArg {
    Iso,
    Us,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowOpts {
    /// First date (inclusive), YYYY-MM-DD.
    #[arg(long)]
    pub from: Option<String>,
    /// Last date (inclusive), YYYY-MM-DD.
    #[arg(long)]
    pub to: Option<String>,
    /// Returns per realized-variance window.
    #[arg(long, default_value_t = 21)]
    pub n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RvArgs {
    #[arg(long)]
    pub prices: String,
    #[command(flatten)]
    pub window: WindowOpts,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Vix,
    Vxo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingArg {
    #[value(name = "theory_365_252")]
    Theory365252,
    #[value(name = "theory_30_21")]
    Theory3021,
    #[value(name = "empirical_mean_ratio")]
    EmpiricalMeanRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignmentArg {
    Concurrent,
    Preceding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionArg {
    /// RV² / index²
    RvOverIndex,
    /// index² / RV²
    IndexOverRv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairOpts {
    #[arg(long)]
    pub prices: String,
    #[arg(long)]
    pub index: String,
    #[arg(long, value_enum, default_value_t = KindArg::Vix)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = AlignmentArg::Concurrent)]
    pub alignment: AlignmentArg,
    #[command(flatten)]
    pub window: WindowOpts,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatioArgs {
    #[command(flatten)]
    pub pair: PairOpts,
    #[arg(long, value_enum, default_value_t = DirectionArg::RvOverIndex)]
    pub direction: DirectionArg,
    /// Comma-separated family names; defaults to the six core families.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub pair: PairOpts,
    #[arg(long, value_enum, default_value_t = ScalingArg::EmpiricalMeanRatio)]
    pub scaling: ScalingArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VixArgs {
    /// Chain file; give twice (near, next) to blend to the target horizon.
    #[arg(long, required = true, num_args = 1)]
    pub chain: Vec<String>,
    #[arg(long, default_value_t = 30.0)]
    pub target_days: f64,
    #[arg(long)]
    pub allow_extrapolation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Heston,
    Mult,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelOpts {
    /// Named parameter set: heston, mult, heston-single-day, mult-single-day.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelOpts,
    /// Initial variance; stationary draws when omitted.
    #[arg(long)]
    pub v0: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Emit the first path, keeping every `stride`-th value.
    #[arg(long)]
    pub emit_path: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VarrvArgs {
    #[command(flatten)]
    pub model: ModelOpts,
    /// Horizons in trading days.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,21,42,63,126,252")]
    pub horizons: Vec<f64>,
    /// Monte Carlo paths; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub paths: usize,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Also emit the reduced curve on a log grid of γT from 1e-2 to 1e2.
    #[arg(long)]
    pub reduced: bool,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Price file for the empirical curve.
    #[arg(long)]
    pub prices: Option<String>,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long)]
    pub prices: String,
    #[arg(long, value_enum, default_value_t = ModelArg::Heston)]
    pub model: ModelArg,
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    #[command(flatten)]
    pub series: SeriesOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ReportName {
    #[value(name = "table1")]
    Table1,
    #[value(name = "table2")]
    Table2,
    #[value(name = "table3-concurrent")]
    Table3Concurrent,
    #[value(name = "table-preceding")]
    TablePreceding,
    #[value(name = "fig2-slope")]
    Fig2Slope,
    #[value(name = "fig13")]
    Fig13,
    #[value(name = "fig14")]
    Fig14,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    #[arg(value_enum)]
    pub name: ReportName,
    /// Directory holding sp500.csv, vix.csv and vxo.csv.
    #[arg(long, default_value = "data")]
    pub data_dir: String,
    #[command(flatten)]
    pub series: SeriesOpts,
}
