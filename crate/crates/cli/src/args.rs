use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qael",
    version,
    about = "Adiabatic elimination for two-timescale Lindblad models"
)]
pub struct Cli {
    /// Seed for randomized initial states.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify the fast generator and print the assumption report.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the reduced model.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Override the model's epsilon.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Directory for reduced_model.json (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare full and reduced dynamics at one epsilon.
    Validate {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare full and reduced dynamics over several epsilons and fit the
    /// error exponent.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        order: u32,
        /// Comma-separated list, at least three values.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[command(flatten)]
        run: RunArgs,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Built-in models.
    Example {
        name: ExampleName,
        #[command(flatten)]
        params: ExampleParams,
        /// Print the model file instead of reducing it.
        #[arg(long)]
        emit_model: bool,
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    CavityQubit,
    PurcellTwoQubit,
}

impl ExampleName {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::CavityQubit => "cavity-qubit",
            ExampleName::PurcellTwoQubit => "purcell-two-qubit",
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct ExampleParams {
    #[arg(long, default_value_t = 10.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.1)]
    pub g: f64,
    /// Drive amplitude, `re` or `re,im`.
    #[arg(long, default_value = "1")]
    pub u: String,
    #[arg(long = "n-trunc", default_value_t = 16)]
    pub n_trunc: usize,
}

#[derive(Clone, Debug, Args)]
pub struct Source {
    /// Model file (JSON).
    #[arg(conflicts_with = "example")]
    pub model: Option<PathBuf>,
    /// Use a built-in model instead of a file.
    #[arg(long)]
    pub example: Option<ExampleName>,
    #[command(flatten)]
    pub params: ExampleParams,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// `fixed:T` or `slow:tau` (final time tau / eps^2).
    #[arg(long, default_value = "slow:1")]
    pub horizon: String,
    /// Time points per run.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Slow initial state.
    #[arg(long, value_enum, default_value_t = Initial::Excited)]
    pub initial: Initial,
    /// Directory for CSV and summary output (summary goes to stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Initial {
    /// Last slow basis state.
    Excited,
    /// First slow basis state.
    Ground,
    /// Maximally mixed slow state.
    Mixed,
    /// Random slow state from `--seed`.
    Random,
}
