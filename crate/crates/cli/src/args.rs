use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "billiards", version, about = "Exact billiard trajectories in the two-chamber table P_alpha")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Table and field parameters shared by every subcommand. Rationals are
/// written as `a` or `a/b`.
#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// `u` in `alpha^2 = u + v*alpha`
    #[arg(long, default_value = "2")]
    pub alpha_u: String,
    /// `v` in `alpha^2 = u + v*alpha`
    #[arg(long, default_value = "0")]
    pub alpha_v: String,
    /// Height of the lower chamber (must exceed 1)
    #[arg(long, default_value = "2")]
    pub l1: String,
    /// Height of the upper chamber (must exceed 1)
    #[arg(long, default_value = "2")]
    pub l2: String,
    /// Seed for every randomized choice
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Decimal places for display fields and SVG coordinates
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the table as exact JSON
    Build {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Trace gamma_0..gamma_N and check every bounce count and crossing
    Verify {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Largest family index
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Verify against a table read from JSON instead of the built one
        #[arg(long)]
        table_file: Option<PathBuf>,
    },
    /// Find the first family trajectory that avoids a set of points
    Evade {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Blocking set as JSON: {"points": [...]}
        #[arg(long, conflicts_with = "random")]
        blockers: Option<PathBuf>,
        /// Draw a random blocking set of this size instead (uses --seed)
        #[arg(long)]
        random: Option<usize>,
        /// Largest family index to try
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
    /// Draw the table, a trajectory, or its unfolding as SVG
    Render {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, value_enum, default_value_t = RenderWhat::Table)]
        what: RenderWhat,
        /// Family index for `gamma` and `unfolded`
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Summarize the family and, optionally, how often points are hit
    Report {
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Largest family index
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Points whose hit indices should be listed
        #[arg(long)]
        blockers: Option<PathBuf>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderWhat {
    Table,
    Gamma,
    Unfolded,
}
