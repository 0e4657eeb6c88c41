use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::record::Format;

#[derive(Debug, Parser)]
#[command(name = "ctcsim", version, about = "Qubit scattering off a closed time-like curve, solved two ways")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario through one or both engines.
    Run(RunArgs),
    /// Evaluate a scenario over a grid of alpha2 or theta values.
    Sweep(SweepArgs),
    /// Run both engines and report agreement, divergence and trace distance.
    Compare(CommonArgs),
    /// Check the no-signaling placement of the wormhole mouths.
    Geometry(GeometryArgs),
    /// Compare the engines on random two-qubit Clifford interactions.
    ConjectureCheck(ConjectureArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Db,
    Heisenberg,
    #[default]
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    #[default]
    Eigen,
    Iterate,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Alpha2,
    Theta,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Named scenario: cz, cnot or chained_cnot_hadamard.
    pub scenario: Option<String>,
    /// TOML circuit file, instead of a named scenario.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the prepared |alpha|^2.
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Override the preparation phase.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Wormhole time shift; with --d selects the Gaussian overlap model.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Width of the temporal distribution; with --tau selects the Gaussian overlap model.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Fixed-point method for the density-matrix engine.
    #[arg(long, value_enum, default_value_t)]
    pub solver: SolverChoice,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t)]
    pub model: ModelChoice,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// TOML file with a [geometry] table.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random interactions to try.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}
