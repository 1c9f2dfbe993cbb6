use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "erdyn", version, about = "Dynamical Erdős–Rényi graphs at criticality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Master seed; drawn from system entropy and recorded in the manifest when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Result file. A `<out>.manifest.json` is written next to it. Stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads; never changes results.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// One trajectory of the dynamical graph on [0, horizon], as an event log.
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Probability that sup_t |L_n(t)| exceeds β n^{2/3} log^{1/3} n.
    Sup {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Static component tails against the closed-form leading terms.
    Tails {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long = "A", value_delimiter = ',', required = true)]
        #[serde(rename = "A")]
        big_a: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Covariances of F_n and G_n under ε-noise.
    Noise {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Defaults to {0, n^-2/3, n^-1/3, n^-1/6, n^-1/8, 1}.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1_000)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Moments of the occupation times Z_1, Z_2 and the Cauchy–Schwarz ratio.
    SecondMoment {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 200)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Per-sub-interval exceedance frequencies over [0, 1].
    UnionBound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 200)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Reveal frequencies of the breadth-first algorithm for 1{|C_1| >= N}, per edge orbit.
    Reveal {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// N; defaults to ceil(n^{2/3}).
        #[arg(long)]
        threshold: Option<u32>,
        #[arg(long, default_value_t = 1_000)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Exact Fourier identities on random tables over m bits.
    SpectralCheck {
        #[arg(long, default_value_t = 6)]
        m: u32,
        #[arg(long, default_value_t = 0.25)]
        p: f64,
        /// Random tables (or pairs) per check.
        #[arg(long, default_value_t = 20)]
        reps: u64,
        #[command(flatten)]
        #[serde(skip)]
        common: Common,
    },
    /// Re-run the invocation recorded in a manifest.
    Replay {
        manifest: PathBuf,
        /// Write here instead of the recorded path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn common_mut(&mut self) -> Option<&mut Common> {
        match self {
            Command::Simulate { common, .. }
            | Command::Sup { common, .. }
            | Command::Tails { common, .. }
            | Command::Noise { common, .. }
            | Command::SecondMoment { common, .. }
            | Command::UnionBound { common, .. }
            | Command::Reveal { common, .. }
            | Command::SpectralCheck { common, .. } => Some(common),
            Command::Replay { .. } => None,
        }
    }

    pub fn common(&self) -> Option<&Common> {
        match self {
            Command::Simulate { common, .. }
            | Command::Sup { common, .. }
            | Command::Tails { common, .. }
            | Command::Noise { common, .. }
            | Command::SecondMoment { common, .. }
            | Command::UnionBound { common, .. }
            | Command::Reveal { common, .. }
            | Command::SpectralCheck { common, .. } => Some(common),
            Command::Replay { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Sup { .. } => "sup",
            Command::Tails { .. } => "tails",
            Command::Noise { .. } => "noise",
            Command::SecondMoment { .. } => "second-moment",
            Command::UnionBound { .. } => "union-bound",
            Command::Reveal { .. } => "reveal",
            Command::SpectralCheck { .. } => "spectral-check",
            Command::Replay { .. } => "replay",
        }
    }
}
