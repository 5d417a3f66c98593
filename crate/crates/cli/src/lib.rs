//! Batch front end for the `klmix` library: combine event probabilities,
//! solve centroids, run the combined-LFDR pipeline, and emit the data
//! grids behind the weight-surface and means figures.

pub mod commands;
pub mod error;
pub mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "klmix", version, about = "Hedged combination of conflicting probability distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine probabilities of a single event read from a text file
    CombineProbs(CombineProbsArgs),
    /// Estimate LFDRs three ways, screen them, and combine the survivors
    CombineLfdr(CombineLfdrArgs),
    /// Optimal weights and centroid of a distribution family
    Capacity(CapacityArgs),
    /// Write a seeded synthetic expression dataset
    Simulate(SimulateArgs),
    /// Optimal weight over a grid of probability pairs
    FigureWeightSurface(FigureWeightSurfaceArgs),
    /// Classical means against the hedged combination over a p range
    FigureMeans(FigureMeansArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Convergence threshold on the certified gap, in nats
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
}

impl SolverArgs {
    pub fn to_config(&self) -> Result<klmix::SolverConfig, CliError> {
        if !(self.tol > 0.0) {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(CliError::Input("--max-iter must be positive".into()));
        }
        Ok(klmix::SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
        })
    }
}

#[derive(Debug, Args)]
pub struct CombineProbsArgs {
    /// Text file with one probability per line ('#' starts a comment)
    #[arg(long)]
    pub input: PathBuf,
    /// Lower end of the plausible interval
    #[arg(long, default_value_t = 0.0)]
    pub lower: f64,
    /// Upper end of the plausible interval
    #[arg(long, default_value_t = 1.0)]
    pub upper: f64,
    /// Report divergences in bits instead of nats
    #[arg(long)]
    pub bits: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CombineLfdrArgs {
    /// Expression CSV: header row of replicate names, first column gene id
    #[arg(long, conflicts_with = "simulate")]
    pub input: Option<PathBuf>,
    /// Simulate instead of reading: N n pi0 effect_sd noise_sd
    #[arg(long, num_args = 5, value_names = ["N", "N_REPS", "PI0", "EFFECT_SD", "NOISE_SD"])]
    pub simulate: Option<Vec<f64>>,
    /// Seed for --simulate
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Assumed lower bound on the null-gene proportion
    #[arg(long, default_value_t = 0.8)]
    pub pi0_lower: f64,
    /// Histogram bins for the density estimate
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Null-proportion estimation threshold
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// JSON file: an array of probability tuples, one per distribution
    #[arg(long)]
    pub input: PathBuf,
    /// Report divergences in bits instead of nats
    #[arg(long)]
    pub bits: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// N n pi0 effect_sd noise_sd
    #[arg(long, num_args = 5, value_names = ["N", "N_REPS", "PI0", "EFFECT_SD", "NOISE_SD"], required = true)]
    pub simulate: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureWeightSurfaceArgs {
    /// Grid spacing over (0, 1), at most 0.5
    #[arg(long, default_value_t = 0.02)]
    pub grid_step: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureMeansArgs {
    /// Optional CSV with columns p_low,p_high; defaults to a log-spaced
    /// sweep of p_low over [1e-3, 0.2] against a constant p_high
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of abscissa points for the default sweep
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Constant upper probability for the default sweep
    #[arg(long, default_value_t = 0.2)]
    pub p_high: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::CombineProbs(args) => commands::combine_probs::run(&args),
        Command::CombineLfdr(args) => commands::combine_lfdr::run(&args),
        Command::Capacity(args) => commands::capacity::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::FigureWeightSurface(args) => commands::figures::weight_surface(&args),
        Command::FigureMeans(args) => commands::figures::means(&args),
    }
}
