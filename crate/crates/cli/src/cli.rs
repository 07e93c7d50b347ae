use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steerlab::mcstudy::KeyMode;
use steerlab::Family;

#[derive(Debug, Parser)]
#[command(name = "steerlab", version, about = "Tripartite steering experiments")]
pub struct Cli {
    /// Where to write the run manifest. Defaults to the output directory
    /// when there is one, standard error otherwise.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All-versus-nothing test on a three-qubit pure state.
    Avn(AvnArgs),
    /// Fine-grained steering inequality.
    #[command(subcommand)]
    Fgi(FgiCommand),
    /// Monte-Carlo uniqueness study.
    Mc(McArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    #[value(name = "2sdi")]
    TwoSided,
    #[value(name = "1sdi")]
    OneSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AvnFamily {
    Gghz,
    Wclass,
    Product,
}

#[derive(Debug, Args)]
pub struct AvnArgs {
    #[arg(long, value_enum, default_value = "2sdi")]
    pub scenario: ScenarioArg,

    #[arg(long, value_enum, conflicts_with = "state", required_unless_present = "state")]
    pub family: Option<AvnFamily>,

    /// GGHZ angle; defaults to pi/4.
    #[arg(long)]
    pub theta: Option<f64>,

    /// W-class amplitudes; default to 1/sqrt(3) each.
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub c1: Option<f64>,

    /// State description as JSON.
    #[arg(long, value_name = "FILE")]
    pub state: Option<PathBuf>,

    /// Alice and Bob settings as JSON; defaults to the all-versus-nothing pair.
    #[arg(long, value_name = "FILE")]
    pub settings: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FgiCommand {
    /// Evaluate CP for a state and explicit settings.
    Eval {
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
        #[arg(long, value_name = "FILE")]
        settings: PathBuf,
        /// Outcome labels as JSON; defaults to the standard labelling.
        #[arg(long, value_name = "FILE")]
        labels: Option<PathBuf>,
    },
    /// Maximise CP over Alice's and Bob's settings.
    Max {
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
        #[arg(long, value_name = "FILE")]
        opt: Option<PathBuf>,
        /// Overrides the seed in the optimizer config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// CP of the noisy GHZ state over a visibility grid, as CSV.
    Noisy {
        /// `start:end:step`.
        #[arg(long, default_value = "0:1:0.01")]
        grid: String,
        #[arg(long, value_name = "FILE")]
        settings: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// CP of a direct sum of GGHZ blocks under block-diagonal settings.
    DirectSum {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct McArgs {
    #[command(subcommand)]
    pub action: Option<McAction>,

    #[command(flatten)]
    pub run: McRunArgs,
}

#[derive(Debug, Subcommand)]
pub enum McAction {
    /// Combine finished runs and re-check duplicates across them.
    Merge {
        #[arg(required = true, num_args = 2.., value_name = "DIR")]
        dirs: Vec<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KeyModeArg {
    Raw,
    Gauge,
}

impl From<KeyModeArg> for KeyMode {
    fn from(k: KeyModeArg) -> Self {
        match k {
            KeyModeArg::Raw => KeyMode::Raw,
            KeyModeArg::Gauge => KeyMode::GaugeCanonical,
        }
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: steerlab::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct McRunArgs {
    #[arg(long, required = true, value_parser = parse_family)]
    pub family: Option<Family>,

    #[arg(long, required = true)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, required = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[arg(long, env = "STEERLAB_WORKERS")]
    pub workers: Option<usize>,

    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long)]
    pub decimals: Option<usize>,

    #[arg(long, value_enum)]
    pub key_mode: Option<KeyModeArg>,

    /// Optimizer config as JSON.
    #[arg(long, value_name = "FILE")]
    pub opt: Option<PathBuf>,
}
