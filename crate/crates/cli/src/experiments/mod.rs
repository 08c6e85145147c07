//! The experiment recipes behind the CLI subcommands.

pub mod c1;
pub mod c2;
pub mod contraction;
pub mod ess_bench;
pub mod fit;
pub mod lda_exp;

use sparsecov::chain::PosteriorSummary;
use sparsecov::datagen::sample_gaussian_data;
use sparsecov::diagnostics::{mnorm, rmse};
use sparsecov::dist::derive_seed;
use sparsecov::matrix::{DataMatrix, SymmetricMatrix};
use sparsecov::shrinkage::run_shrinkage_chain;
use sparsecov::sssl::run_sssl_chain;

use crate::config::{ExperimentConfig, SamplerChoice};
use crate::error::CliError;

/// Seed derivation streams, kept disjoint so adding draws to one stage
/// never perturbs another.
const STREAM_DATA: u64 = 0x0100_0000;
const STREAM_CHAIN: u64 = 0x0200_0000;
const STREAM_TRUTH: u64 = 0x0300_0000;

pub fn data_seed(root: u64, index: u64) -> u64 {
    derive_seed(root, STREAM_DATA + index)
}

pub fn chain_seed(root: u64, index: u64) -> u64 {
    derive_seed(root, STREAM_CHAIN + index)
}

pub fn truth_seed(root: u64, index: u64) -> u64 {
    derive_seed(root, STREAM_TRUTH + index)
}

/// The estimators an experiment compares, honoring a `--sampler`
/// restriction.
pub fn estimator_set(config: &ExperimentConfig) -> Vec<SamplerChoice> {
    match config.sampler {
        Some(choice) => vec![choice],
        None => vec![
            SamplerChoice::Shrinkage,
            SamplerChoice::Sssl,
            SamplerChoice::Sample,
        ],
    }
}

/// Zero-mean sample covariance X'X / n.
pub fn sample_covariance(data: &DataMatrix) -> SymmetricMatrix {
    let s = data.scatter();
    let inv_n = 1.0 / data.n_rows() as f64;
    SymmetricMatrix::from_fn(s.dim(), |i, j| s.get(i, j) * inv_n)
}

/// Point estimate of the covariance of `data` under one estimator, plus
/// the posterior summary when a sampler ran.
pub fn estimate_covariance(
    data: &DataMatrix,
    choice: SamplerChoice,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(SymmetricMatrix, Option<PosteriorSummary>), CliError> {
    let n = data.n_rows();
    let p = data.n_cols();
    match choice {
        SamplerChoice::Sample => Ok((sample_covariance(data), None)),
        SamplerChoice::Shrinkage => {
            let hyper = config.shrinkage_hyper(n, p);
            let run = run_shrinkage_chain(data, &hyper, &config.sampler_config(seed))?;
            Ok((run.summary.mean.clone(), Some(run.summary)))
        }
        SamplerChoice::Sssl => {
            let hyper = config.sssl_hyper(p);
            let run = run_sssl_chain(data, &hyper, &config.sampler_config(seed))?;
            Ok((run.summary.mean.clone(), Some(run.summary)))
        }
    }
}

/// rmse and mnorm of one estimator against the truth on freshly simulated
/// data.
pub struct ReplicationScore {
    pub rmse: f64,
    pub mnorm: f64,
}

pub fn score_replication(
    truth: &SymmetricMatrix,
    data: &DataMatrix,
    choice: SamplerChoice,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ReplicationScore, CliError> {
    let (estimate, _) = estimate_covariance(data, choice, config, seed)?;
    Ok(ReplicationScore {
        rmse: rmse(&estimate, truth)?,
        mnorm: mnorm(&estimate, truth)?,
    })
}

/// Simulate one replication's dataset from a truth matrix.
pub fn simulate(
    truth: &SymmetricMatrix,
    n: usize,
    root: u64,
    index: u64,
) -> Result<DataMatrix, CliError> {
    Ok(sample_gaussian_data(truth, n, data_seed(root, index))?)
}
