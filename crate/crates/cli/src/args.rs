use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qda", version, about = "Quantum dynamical activity of Lindblad dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every method at a single horizon.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Method comparison over a grid of horizons.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau_min: f64,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 60)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Jump-count statistics and the uncertainty-relation check.
    Trajectories {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        n_traj: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Bures angle against the speed-limit integral.
    Qsl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tau: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON model file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = Initial::Steady)]
    pub initial: Initial,
    /// CSV destination; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Initial quadrature grid size.
    #[arg(long, default_value_t = 256)]
    pub grid_steps: usize,
    /// Evaluate on `grid_steps` only, without doubling or extrapolation.
    #[arg(long)]
    pub no_refine: bool,
    #[arg(long, default_value_t = 1e-4)]
    pub dtheta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    DrivenQubit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Initial {
    Steady,
    Ground,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}
