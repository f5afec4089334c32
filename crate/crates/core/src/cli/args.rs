use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{ModelTag, OutputFormat, SweepAxis};
use crate::evaluation::EstimatorKind;

#[derive(Debug, Parser)]
#[command(
    name = "confreg",
    version,
    about = "Coverage and size of fiducial, improved, degenerate and Bayesian region estimators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the two-point suboptimality example end to end.
    Reproduce(CommonArgs),
    /// Coverage, expected size and pairwise dominance for a list of estimators.
    Eval(CommonArgs),
    /// Analytic sizes of the fiducial and improved estimators along one axis.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Falls back to $CONFREG_SEED, then 1.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo samples per (estimator, theta).
    #[arg(long = "n")]
    pub n: Option<u64>,
    /// Symmetric band (delta, 1 - delta).
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, value_enum)]
    pub model: Option<ModelTag>,
    #[arg(long)]
    pub sigma0: Option<String>,
    #[arg(long)]
    pub sigma1: Option<String>,
    /// Scale of the location model.
    #[arg(long)]
    pub sigma: Option<String>,
    /// Comma-separated: fiducial, improved, degenerate, bayes, flat_prior.
    #[arg(long, value_delimiter = ',')]
    pub estimators: Option<Vec<EstimatorKind>>,
    /// Prior mass on theta = 1 used by bayes.
    #[arg(long)]
    pub prior1: Option<String>,
    /// Credible level used by bayes.
    #[arg(long)]
    pub level: Option<String>,
    /// Comma-separated evaluation points (labels 0,1 or real locations).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Report directory [default: ./reports].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Monte Carlo threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub axis: Option<SweepAxis>,
    /// Comma-separated decimal values along the axis.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<String>>,
}
