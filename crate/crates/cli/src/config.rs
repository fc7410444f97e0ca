use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use diverse_medians::oracle::EnumerationLimits;
use diverse_medians::Rational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Lines,
    Fasta,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Median,
    Diameter,
    SumDispersion,
    MinDispersion,
    Bound,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Auto,
    Dp,
    Greedy,
    Sample,
    Lp,
    ExactConstruction,
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: diverse_medians::Error| e.to_string())
}

/// Diverse Hamming medians of a string dataset, written as one JSON document.
#[derive(Debug, Clone, Parser)]
#[command(name = "diverse-medians", version)]
pub struct RunConfig {
    /// Dataset file. Optional only for `--objective bound` with `--sizes`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Lines)]
    pub format: Format,
    #[arg(long, value_enum)]
    pub objective: Objective,
    /// Cost slack as `p/q` or a decimal; 0 means exact medians.
    #[arg(long, default_value = "0", value_parser = rational)]
    pub epsilon: Rational,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value = "1/4", value_parser = rational)]
    pub delta: Rational,
    #[arg(long, default_value = "1/8", value_parser = rational)]
    pub eta: Rational,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Symbols in tie-break order: comma-separated, or one per character.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Minimum distance for `--objective bound`.
    #[arg(long)]
    pub t: Option<u64>,
    /// Comma-separated per-position alphabet sizes for `--objective bound`;
    /// defaults to the dataset's majority-set sizes.
    #[arg(long)]
    pub sizes: Option<String>,
    /// Let `auto` use the LP pipeline for approximate min dispersion.
    #[arg(long)]
    pub lp: bool,
    /// Scan op-list prefixes linearly instead of by binary search.
    #[arg(long)]
    pub linear_scan: bool,
    /// Exact sum dispersion with pairwise distinct members.
    #[arg(long)]
    pub distinct: bool,
    #[arg(long, default_value_t = 100_000)]
    pub max_candidates: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_tuples: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_states: u64,
    /// Write the LP relaxation in sparse triplet form (LP strategy only).
    #[arg(long)]
    pub dump_lp: Option<PathBuf>,
    /// Record wall time in the document; output is then no longer
    /// byte-reproducible.
    #[arg(long)]
    pub timing: bool,
}

impl RunConfig {
    /// Defaults for the given objective and input, as if parsed from flags.
    pub fn new(objective: Objective, input: Option<PathBuf>) -> Self {
        let mut cfg = RunConfig::parse_from(["diverse-medians", "--objective", "median"]);
        cfg.objective = objective;
        cfg.input = input;
        cfg
    }

    pub fn limits(&self) -> EnumerationLimits {
        EnumerationLimits {
            max_candidates: self.max_candidates,
            max_tuples: self.max_tuples,
            max_states: self.max_states,
        }
    }
}
