//! Spike-and-slab baseline sampler (SSSL).
//!
//! Off-diagonal entries carry the two-component mixture prior
//! (1 - pi) N(0, nu0^2) + pi N(0, nu1^2) with nu0 < nu1, diagonals the same
//! exponential prior as the shrinkage model. The sampler shares the blocked
//! column machinery, with the prior-variance diagonal D populated from the
//! current slab indicators, followed by a conjugate indicator refresh.
//!
//! Under the positive definiteness restriction pi is no longer the prior
//! inclusion probability; as in practice, the sampler uses the unrestricted
//! conditionals.

use crate::chain::{
    run_chain, ChainRun, CovarianceSampler, SamplerConfig, SamplerError, SweepStats,
};
use crate::column::update_column_with_priors;
use crate::dist::RngHandle;
use crate::matrix::{ColumnPartition, DataMatrix, SymmetricMatrix};
use crate::shrinkage::init_chain as shrinkage_init;
use crate::shrinkage::ShrinkageHyperparams;

/// Prior knobs of the spike-and-slab sampler. The variance fields hold the
/// squared scales nu0^2 and nu1^2.
#[derive(Debug, Clone, Copy)]
pub struct SsslHyperparams {
    pub nu0_sq: f64,
    pub nu1_sq: f64,
    /// Mixture weight pi in (0, 1).
    pub pi_mix: f64,
    /// Rate of the exponential prior on diagonal entries.
    pub lambda: f64,
}

impl SsslHyperparams {
    /// Baseline-faithful defaults: nu0 = 0.02, nu1 = 1, pi = 2/(p-1),
    /// lambda = 1. The mixture weight is capped at 0.9 so that tiny p
    /// (where 2/(p-1) reaches or exceeds 1) still yields a proper mixture.
    pub fn default_for(p: usize) -> Self {
        SsslHyperparams {
            nu0_sq: 0.02 * 0.02,
            nu1_sq: 1.0,
            pi_mix: (2.0 / (p as f64 - 1.0)).min(0.9),
            lambda: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let ok = self.nu0_sq > 0.0
            && self.nu1_sq.is_finite()
            && self.nu0_sq <= self.nu1_sq
            && self.pi_mix > 0.0
            && self.pi_mix < 1.0
            && self.lambda > 0.0
            && self.lambda.is_finite();
        if !ok {
            return Err(SamplerError::InvalidConfig(format!(
                "SSSL hyperparameters invalid (need 0 < nu0_sq <= nu1_sq, pi in (0,1), lambda > 0): {self:?}"
            )));
        }
        Ok(())
    }
}

/// Symmetric boolean matrix for the slab indicators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabIndicators {
    dim: usize,
    data: Vec<bool>,
}

impl SlabIndicators {
    pub fn all_spike(dim: usize) -> Self {
        SlabIndicators {
            dim,
            data: vec![false; dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Current draw plus slab indicators.
#[derive(Debug, Clone)]
pub struct SsslChainState {
    pub sigma: SymmetricMatrix,
    pub slab: SlabIndicators,
    pub iteration: u64,
    pub degenerate_columns: Vec<usize>,
}

/// Probability that an entry with current value `sigma_jk` is assigned to
/// the slab, computed in log space so extreme density ratios cannot
/// overflow.
pub fn slab_probability(sigma_jk: f64, hyper: &SsslHyperparams) -> f64 {
    let s2 = sigma_jk * sigma_jk;
    let log_slab = hyper.pi_mix.ln() - 0.5 * hyper.nu1_sq.ln() - 0.5 * s2 / hyper.nu1_sq;
    let log_spike =
        (1.0 - hyper.pi_mix).ln() - 0.5 * hyper.nu0_sq.ln() - 0.5 * s2 / hyper.nu0_sq;
    1.0 / (1.0 + (log_spike - log_slab).exp())
}

/// Conjugate refresh of every slab indicator given the current entries.
pub fn sssl_update_indicators(
    state: &mut SsslChainState,
    hyper: &SsslHyperparams,
    rng: &mut RngHandle,
) {
    let p = state.sigma.dim();
    for j in 0..p {
        for k in (j + 1)..p {
            let prob = slab_probability(state.sigma.get(j, k), hyper);
            state.slab.set(j, k, rng.uniform() < prob);
        }
    }
}

/// One full sweep: column updates with prior variances nu0^2/nu1^2 chosen
/// by the current indicators, then the indicator refresh.
pub fn sssl_sweep(
    state: &mut SsslChainState,
    scatter: &SymmetricMatrix,
    n: usize,
    hyper: &SsslHyperparams,
    rng: &mut RngHandle,
) -> Result<SweepStats, SamplerError> {
    let p = state.sigma.dim();
    let mut stats = SweepStats::default();
    for j in 0..p {
        let spart = scatter.partition(j)?;
        let draw = sssl_update_column(state, j, &spart, n, hyper, rng)?;
        if draw {
            stats.chi_clamps += 1;
        }
    }
    sssl_update_indicators(state, hyper, rng);
    state.iteration += 1;
    Ok(stats)
}

fn sssl_update_column(
    state: &mut SsslChainState,
    j: usize,
    scatter_part: &ColumnPartition,
    n: usize,
    hyper: &SsslHyperparams,
    rng: &mut RngHandle,
) -> Result<bool, SamplerError> {
    let p = state.sigma.dim();
    let mut prior_vars = Vec::with_capacity(p - 1);
    for a in 0..(p - 1) {
        let ia = if a < j { a } else { a + 1 };
        prior_vars.push(if state.slab.get(ia, j) {
            hyper.nu1_sq
        } else {
            hyper.nu0_sq
        });
    }
    let draw = update_column_with_priors(
        &mut state.sigma,
        scatter_part,
        n,
        j,
        &prior_vars,
        hyper.lambda,
        rng,
    )?;
    Ok(draw.chi_clamped)
}

/// Initialize the SSSL chain with the same diagonal-variance starting
/// matrix as the shrinkage sampler and all indicators in the spike.
pub fn sssl_init_chain(
    data: &DataMatrix,
    hyper: &SsslHyperparams,
    seed: u64,
) -> Result<(SsslChainState, SymmetricMatrix, RngHandle), SamplerError> {
    hyper.validate()?;
    // Reuse the shrinkage initializer for Sigma and the scatter cache.
    let proxy = ShrinkageHyperparams::default_for(data.n_rows().max(2), data.n_cols().max(2));
    let init = shrinkage_init(data, &proxy, seed)?;
    let p = data.n_cols();
    Ok((
        SsslChainState {
            sigma: init.state.sigma,
            slab: SlabIndicators::all_spike(p),
            iteration: 0,
            degenerate_columns: init.state.degenerate_columns,
        },
        init.scatter,
        init.rng,
    ))
}

/// The spike-and-slab kernel packaged for the chain driver.
pub struct SsslSampler {
    state: SsslChainState,
    scatter_parts: Vec<ColumnPartition>,
    n: usize,
    hyper: SsslHyperparams,
}

impl SsslSampler {
    pub fn new(
        data: &DataMatrix,
        hyper: &SsslHyperparams,
        seed: u64,
    ) -> Result<(Self, RngHandle), SamplerError> {
        let (state, scatter, rng) = sssl_init_chain(data, hyper, seed)?;
        let p = data.n_cols();
        let scatter_parts = (0..p)
            .map(|j| scatter.partition(j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((
            SsslSampler {
                state,
                scatter_parts,
                n: data.n_rows(),
                hyper: *hyper,
            },
            rng,
        ))
    }

    pub fn state(&self) -> &SsslChainState {
        &self.state
    }
}

impl CovarianceSampler for SsslSampler {
    type Snapshot = SsslChainState;

    fn dim(&self) -> usize {
        self.state.sigma.dim()
    }

    fn sigma(&self) -> &SymmetricMatrix {
        &self.state.sigma
    }

    fn sweep(&mut self, rng: &mut RngHandle) -> Result<SweepStats, SamplerError> {
        let p = self.dim();
        let mut stats = SweepStats::default();
        for j in 0..p {
            let clamped = sssl_update_column(
                &mut self.state,
                j,
                &self.scatter_parts[j],
                self.n,
                &self.hyper,
                rng,
            )?;
            if clamped {
                stats.chi_clamps += 1;
            }
        }
        sssl_update_indicators(&mut self.state, &self.hyper, rng);
        self.state.iteration += 1;
        Ok(stats)
    }

    fn snapshot(&self) -> SsslChainState {
        self.state.clone()
    }

    fn restore(&mut self, snapshot: &SsslChainState) {
        self.state = snapshot.clone();
    }
}

/// Run a full SSSL chain on `data` and summarize it.
pub fn run_sssl_chain(
    data: &DataMatrix,
    hyper: &SsslHyperparams,
    config: &SamplerConfig,
) -> Result<ChainRun, SamplerError> {
    let (mut sampler, mut rng) = SsslSampler::new(data, hyper, config.seed)?;
    run_chain(&mut sampler, config, &mut rng)
}
