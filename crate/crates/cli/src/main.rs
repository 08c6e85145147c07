//! `sparsecov`: experiment runner for the sparse covariance samplers.
//!
//! Subcommands: `c1`, `c2`, `ess-bench`, `lda`, `contraction`, `fit`.
//! Options resolve as defaults <- `--quick` profile <- `--config` file <-
//! explicit flags. Exit codes: 0 success, 1 configuration error, 2 data
//! error, 3 numerical failure.

mod config;
mod csvio;
mod error;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Overrides, SamplerChoice};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "sparsecov",
    about = "Blocked Gibbs samplers for sparse covariance estimation: simulation benchmarks, mixing diagnostics, and LDA classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed 12-variable sparse covariance benchmark (n = 250)
    C1(RunArgs),
    /// Random sparse covariance benchmark over the (n, mu) grid (p = 50)
    C2(RunArgs),
    /// Per-entry effective-sample-size comparison of the two samplers
    EssBench(RunArgs),
    /// LOOCV classification with each covariance estimator
    Lda(RunArgs),
    /// Posterior contraction study over growing sample sizes
    Contraction(RunArgs),
    /// Fit one sampler to a CSV data matrix and write the posterior summary
    Fit(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed; every report is a pure function of (config, seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Reduced budget profile: 500 + 500 draws, 5 replications
    #[arg(long)]
    quick: bool,
    /// Output directory for the run reports
    #[arg(long)]
    out: Option<PathBuf>,
    /// Input CSV (labeled dataset for lda, data matrix for fit)
    #[arg(long)]
    data: Option<PathBuf>,
    /// Number of features kept by the t-statistic selection
    #[arg(long)]
    k_features: Option<usize>,
    /// Restrict to one estimator
    #[arg(long, value_parser = SamplerChoice::parse)]
    sampler: Option<SamplerChoice>,
    /// Replications (c1, c2) or seeds (contraction)
    #[arg(long)]
    replications: Option<usize>,
    /// Burn-in sweeps
    #[arg(long)]
    burn_in: Option<usize>,
    /// Retained posterior draws
    #[arg(long)]
    n_samples: Option<usize>,
    /// Keep every thin-th post-burn-in draw
    #[arg(long)]
    thin: Option<usize>,
    /// Beta parameter a of the shrinkage prior
    #[arg(long)]
    a: Option<f64>,
    /// Beta parameter b of the shrinkage prior
    #[arg(long)]
    b: Option<f64>,
    /// Global shrinkage variance tau1^2 (default: 1/(n p^4))
    #[arg(long)]
    tau1_sq: Option<f64>,
    /// Rate of the Gamma(1, lambda/2) prior on diagonals
    #[arg(long)]
    lambda: Option<f64>,
    /// Eigenvalue truncation bound (default: none)
    #[arg(long)]
    tau: Option<f64>,
    /// SSSL spike variance nu0^2
    #[arg(long)]
    nu0_sq: Option<f64>,
    /// SSSL slab variance nu1^2
    #[arg(long)]
    nu1_sq: Option<f64>,
    /// SSSL mixture weight (default: 2/(p-1))
    #[arg(long)]
    pi_mix: Option<f64>,
    /// Restrict the c2 grid to one sample size; sample size for ess-bench
    #[arg(long)]
    n: Option<usize>,
    /// Restrict the c2 grid to one signal bound mu
    #[arg(long)]
    mu: Option<f64>,
    /// Subtract column means before fitting (fit only)
    #[arg(long)]
    center: bool,
    /// Rank features by the Welch t statistic instead of pooled variance
    #[arg(long)]
    welch: bool,
    /// Select features once on the full data (leaky reproduction variant)
    #[arg(long)]
    select_full_data: bool,
    /// Visit columns in random order within each sweep
    #[arg(long)]
    random_scan: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            out_dir: self.out.clone(),
            quick: self.quick.then_some(true),
            replications: self.replications,
            burn_in: self.burn_in,
            n_samples: self.n_samples,
            thin: self.thin,
            a: self.a,
            b: self.b,
            tau1_sq: self.tau1_sq,
            lambda: self.lambda,
            tau: self.tau,
            nu0_sq: self.nu0_sq,
            nu1_sq: self.nu1_sq,
            pi_mix: self.pi_mix,
            data: self.data.clone(),
            k_features: self.k_features,
            sampler: self.sampler,
            n: self.n,
            mu: self.mu,
            center: self.center.then_some(true),
            welch: self.welch.then_some(true),
            select_full_data: self.select_full_data.then_some(true),
            random_scan: self.random_scan.then_some(true),
        }
    }

    fn resolve(&self, experiment: &str) -> Result<ExperimentConfig, CliError> {
        let file = self
            .config
            .as_ref()
            .map(|p| Overrides::from_file(p))
            .transpose()?;
        ExperimentConfig::resolve(experiment, file, self.overrides())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::C1(args) => experiments::c1::run(&args.resolve("c1")?),
        Command::C2(args) => experiments::c2::run(&args.resolve("c2")?),
        Command::EssBench(args) => experiments::ess_bench::run(&args.resolve("ess-bench")?),
        Command::Lda(args) => experiments::lda_exp::run(&args.resolve("lda")?),
        Command::Contraction(args) => {
            experiments::contraction::run(&args.resolve("contraction")?)
        }
        Command::Fit(args) => experiments::fit::run(&args.resolve("fit")?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
