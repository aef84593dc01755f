//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "twoparam", version, about = "Two-parameter entropies: evaluation, axiom checks, limit scans and maxent")]
pub struct RunConfig {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Write output to `<dir>/<command>.<ext>` when `--out` is not given.
    #[arg(long, global = true, env = "TWOPARAM_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the entropy of one distribution.
    Entropy(EntropyArgs),
    /// Run the sampled axiom suite for a normalizer (JSON lines).
    Axioms(AxiomArgs),
    /// Scan C/(alpha-beta) along straight lines into (1,1) (CSV).
    Scan(ScanArgs),
    /// Solve for the maximum-entropy distribution at fixed mean energy.
    Maxent(MaxentArgs),
    /// Follow the entropy along limit paths towards the Shannon value (JSON lines).
    Limit(LimitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    /// C = (beta - alpha)/k.
    Canonical,
    /// Weierstrass-based construction.
    #[value(name = "counterexample-a", alias = "a")]
    CounterexampleA,
    /// Anisotropic construction without a limit at (1,1).
    #[value(name = "counterexample-b", alias = "b")]
    CounterexampleB,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[arg(long, value_enum, default_value = "canonical")]
    pub norm: NormKind,

    /// Boltzmann-like constant k > 0.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,

    /// Weierstrass amplitude ratio a in (0,1).
    #[arg(long = "weierstrass-a", default_value_t = 0.9)]
    pub weierstrass_a: f64,

    /// Weierstrass frequency b (odd).
    #[arg(long = "weierstrass-b", default_value_t = 7)]
    pub weierstrass_b: u64,

    /// Bound on the truncated Weierstrass tail.
    #[arg(long, default_value_t = 1e-12)]
    pub truncation_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// Probabilities, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "p_file", required_unless_present = "p_file")]
    pub p: Vec<f64>,

    /// One-column file of probabilities ('#' starts a comment).
    #[arg(long)]
    pub p_file: Option<PathBuf>,

    /// Rescale the input to sum to one instead of rejecting it.
    #[arg(long)]
    pub renormalize: bool,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[command(flatten)]
    pub norm: NormArgs,
}

#[derive(Debug, Args)]
pub struct AxiomArgs {
    #[command(flatten)]
    pub norm: NormArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Treat the III' and Shannon-limit failures of counterexample-b as expected.
    #[arg(long)]
    pub expect_b: bool,
    /// Random joint distributions per parameter pair.
    #[arg(long, default_value_t = 1000)]
    pub joints: usize,
    /// Simplex samples per (pair, n) in the maximality check.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Random distributions per pair in the expandability check.
    #[arg(long, default_value_t = 100)]
    pub expand_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub norm: NormArgs,
    /// Slopes m of the lines (1+r, 1+m r); m = 1 is rejected.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,-1,-0.5,0,0.5,2")]
    pub slopes: Vec<f64>,
    /// Decreasing radii: `geom(start,end[,n])` or a comma-separated list.
    #[arg(long, default_value = "geom(1e-1,1e-6)")]
    pub radii: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: ScanFormat,
}

#[derive(Debug, Args)]
pub struct MaxentArgs {
    /// Problem JSON `{energies, target_mean, kappa1, kappa2, tol}`; `-` reads stdin.
    #[arg(long, conflicts_with_all = ["energies", "mean"])]
    pub problem: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "problem")]
    pub energies: Vec<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "problem")]
    pub mean: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1e-6)]
    pub kappa1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -1e-6)]
    pub kappa2: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Perturbations tried by the local-maximality check.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub norm: NormArgs,
    /// Paths: `symmetric`, `slope:M`, `beta-fixed`, `alpha-fixed`; a `:neg`
    /// suffix approaches from alpha < 1.
    /// Defaults to every straight path that stays in the region.
    #[arg(long = "path", value_delimiter = ',')]
    pub paths: Vec<String>,
    /// Decreasing path parameters: `geom(start,end[,n])` or a list.
    #[arg(long, default_value = "geom(1e-1,1e-7)")]
    pub ts: String,
}
