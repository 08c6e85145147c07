//! Shared chain driver: configuration, the sampler trait both Gibbs kernels
//! implement, posterior summarization, and the eigenvalue truncation loop.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::diagnostics::{self, DiagnosticsError};
use crate::dist::{DistError, RngHandle};
use crate::gig::GigError;
use crate::matrix::{MatrixError, SymmetricMatrix};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),

    #[error(transparent)]
    Dist(#[from] DistError),

    #[error(transparent)]
    Gig(#[from] GigError),

    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("eigenvalue truncation rejected {cap} consecutive sweeps; the bound is incompatible with the data scale")]
    TruncationCapExceeded { cap: usize },
}

/// Chain budget and bookkeeping knobs.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub burn_in: usize,
    pub n_samples: usize,
    pub thin: usize,
    pub seed: u64,
    /// Keep the retained draws in the result, not just their summary.
    pub store_full_chain: bool,
    /// Visit columns in random order instead of 0..p. Off by default;
    /// deterministic order keeps runs reproducible sweep-for-sweep.
    pub random_scan: bool,
}

impl Default for SamplerConfig {
    /// The experiment default budget: 5000 retained draws after 5000
    /// burn-in sweeps, no thinning.
    fn default() -> Self {
        SamplerConfig {
            burn_in: 5000,
            n_samples: 5000,
            thin: 1,
            seed: 0,
            store_full_chain: false,
            random_scan: false,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n_samples == 0 {
            return Err(SamplerError::InvalidConfig(
                "n_samples must be at least 1".into(),
            ));
        }
        if self.thin == 0 {
            return Err(SamplerError::InvalidConfig("thin must be at least 1".into()));
        }
        Ok(())
    }
}

/// Counters accumulated over one sweep.
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepStats {
    /// GIG chi arguments clamped up to the 1e-12 floor.
    pub chi_clamps: u64,
    /// GIG b arguments clamped up to the 1e-300 floor for exact-zero
    /// off-diagonal entries.
    pub gig_b_clamps: u64,
}

impl SweepStats {
    pub fn add(&mut self, other: SweepStats) {
        self.chi_clamps += other.chi_clamps;
        self.gig_b_clamps += other.gig_b_clamps;
    }
}

/// Outcome of the eigenvalue truncation check after a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationOutcome {
    /// The bound is infinite; no eigenvalues were computed.
    Disabled,
    Accepted,
    Rejected,
}

/// A Gibbs kernel over covariance matrices; one sweep refreshes the whole
/// state. Implemented by the shrinkage and spike-and-slab samplers.
pub trait CovarianceSampler {
    /// Saved state for the truncation rejection step.
    type Snapshot;

    fn dim(&self) -> usize;
    fn sigma(&self) -> &SymmetricMatrix;
    fn sweep(&mut self, rng: &mut RngHandle) -> Result<SweepStats, SamplerError>;
    fn snapshot(&self) -> Self::Snapshot;
    fn restore(&mut self, snapshot: &Self::Snapshot);
    /// Eigenvalue truncation bound; infinite to disable the check.
    fn truncation_bound(&self) -> f64 {
        f64::INFINITY
    }
}

/// Maximum re-draws of one sweep before the truncation bound is declared
/// incompatible with the data.
pub const TRUNCATION_REJECTION_CAP: usize = 100;

/// Check the truncation bound for a covariance draw.
pub fn check_truncation(
    sigma: &SymmetricMatrix,
    tau: f64,
) -> Result<TruncationOutcome, SamplerError> {
    if !tau.is_finite() {
        return Ok(TruncationOutcome::Disabled);
    }
    let (lo, hi) = sigma.extreme_eigenvalues()?;
    if lo >= 1.0 / tau && hi <= tau {
        Ok(TruncationOutcome::Accepted)
    } else {
        Ok(TruncationOutcome::Rejected)
    }
}

/// Entry-wise posterior summary of the retained draws.
#[derive(Debug, Clone)]
pub struct PosteriorSummary {
    pub mean: SymmetricMatrix,
    pub lower95: SymmetricMatrix,
    pub upper95: SymmetricMatrix,
    /// Effective sample size per entry.
    pub ess: SymmetricMatrix,
    pub wall_seconds: f64,
    pub n_kept: usize,
    /// Entries whose chains were flagged degenerate by the ESS estimator.
    pub ess_degenerate_entries: usize,
    pub chi_clamps: u64,
    pub gig_b_clamps: u64,
    pub truncation_rejections: u64,
}

/// Retained draws stored as per-entry chains over the upper triangle.
#[derive(Debug, Clone)]
pub struct StoredChain {
    dim: usize,
    n_kept: usize,
    /// Indexed by upper-triangle offset of (i, j), i <= j.
    chains: Vec<Vec<f64>>,
}

impl StoredChain {
    fn with_capacity(dim: usize, n_kept: usize) -> Self {
        let entries = dim * (dim + 1) / 2;
        StoredChain {
            dim,
            n_kept: 0,
            chains: (0..entries)
                .map(|_| Vec::with_capacity(n_kept))
                .collect(),
        }
    }

    fn push(&mut self, sigma: &SymmetricMatrix) {
        let mut k = 0;
        for i in 0..self.dim {
            for j in i..self.dim {
                self.chains[k].push(sigma.get(i, j));
                k += 1;
            }
        }
        self.n_kept += 1;
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // row i starts after i rows of lengths dim, dim-1, ...
        i * self.dim - i * (i + 1) / 2 + i + (j - i)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_kept(&self) -> usize {
        self.n_kept
    }

    /// The retained chain of entry (i, j).
    pub fn entry_chain(&self, i: usize, j: usize) -> &[f64] {
        &self.chains[self.offset(i, j)]
    }

    /// Reconstruct the k-th retained draw.
    pub fn draw(&self, k: usize) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(self.dim, |i, j| self.chains[self.offset(i, j)][k])
    }
}

/// Result of driving a kernel for a full budget.
#[derive(Debug, Clone)]
pub struct ChainRun {
    pub summary: PosteriorSummary,
    /// Present when `store_full_chain` was requested.
    pub chain: Option<StoredChain>,
}

/// Run burn-in plus `n_samples * thin` sweeps, retaining every `thin`-th
/// post-burn-in draw, with the truncation rejection loop when the kernel's
/// bound is finite.
pub fn run_chain<S: CovarianceSampler>(
    sampler: &mut S,
    config: &SamplerConfig,
    rng: &mut RngHandle,
) -> Result<ChainRun, SamplerError> {
    config.validate()?;
    let start = Instant::now();
    let dim = sampler.dim();
    let total = config.burn_in + config.n_samples * config.thin;
    let mut stored = StoredChain::with_capacity(dim, config.n_samples);
    let mut stats = SweepStats::default();
    let mut truncation_rejections = 0u64;
    let tau = sampler.truncation_bound();
    for it in 0..total {
        if tau.is_finite() {
            let mut rejected = 0usize;
            loop {
                let snapshot = sampler.snapshot();
                stats.add(sampler.sweep(rng)?);
                match check_truncation(sampler.sigma(), tau)? {
                    TruncationOutcome::Rejected => {
                        sampler.restore(&snapshot);
                        rejected += 1;
                        truncation_rejections += 1;
                        if rejected > TRUNCATION_REJECTION_CAP {
                            return Err(SamplerError::TruncationCapExceeded {
                                cap: TRUNCATION_REJECTION_CAP,
                            });
                        }
                    }
                    _ => break,
                }
            }
        } else {
            stats.add(sampler.sweep(rng)?);
        }
        if it >= config.burn_in && (it - config.burn_in) % config.thin == config.thin - 1 {
            stored.push(sampler.sigma());
        }
    }
    debug_assert_eq!(stored.n_kept(), config.n_samples);
    debug_assert!(sampler.sigma().is_positive_definite());

    let summary = summarize(&stored, start.elapsed().as_secs_f64(), stats, truncation_rejections)?;
    Ok(ChainRun {
        summary,
        chain: config.store_full_chain.then_some(stored),
    })
}

fn summarize(
    stored: &StoredChain,
    wall_seconds: f64,
    stats: SweepStats,
    truncation_rejections: u64,
) -> Result<PosteriorSummary, SamplerError> {
    let p = stored.dim();
    let n_kept = stored.n_kept();
    let entries: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i..p).map(move |j| (i, j)))
        .collect();
    let per_entry: Vec<(f64, f64, f64, f64, bool)> = entries
        .par_iter()
        .map(|&(i, j)| {
            let chain = stored.entry_chain(i, j);
            let mean = chain.iter().sum::<f64>() / n_kept as f64;
            let (lo, hi) = equal_tail_95(chain);
            let (ess, degenerate) = if n_kept >= 2 {
                let e = diagnostics::effective_sample_size(chain)
                    .expect("retained chains are finite with length >= 2");
                (e.value, e.degenerate)
            } else {
                (1.0, true)
            };
            (mean, lo, hi, ess, degenerate)
        })
        .collect();

    let mut mean = SymmetricMatrix::zeros(p);
    let mut lower = SymmetricMatrix::zeros(p);
    let mut upper = SymmetricMatrix::zeros(p);
    let mut ess = SymmetricMatrix::zeros(p);
    let mut degenerate = 0usize;
    for (&(i, j), &(m, lo, hi, e, deg)) in entries.iter().zip(&per_entry) {
        mean.set(i, j, m);
        lower.set(i, j, lo);
        upper.set(i, j, hi);
        ess.set(i, j, e);
        if deg {
            degenerate += 1;
        }
    }
    Ok(PosteriorSummary {
        mean,
        lower95: lower,
        upper95: upper,
        ess,
        wall_seconds,
        n_kept,
        ess_degenerate_entries: degenerate,
        chi_clamps: stats.chi_clamps,
        gig_b_clamps: stats.gig_b_clamps,
        truncation_rejections,
    })
}

/// Equal-tail 95% interval by linear interpolation between order statistics.
fn equal_tail_95(chain: &[f64]) -> (f64, f64) {
    let mut sorted = chain.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite chain"));
    (quantile(&sorted, 0.025), quantile(&sorted, 0.975))
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    } else {
        sorted[n - 1]
    }
}

/// Median of the upper-triangle entries (diagonal included) of an ESS
/// matrix, the scalar mixing summary used in reports.
pub fn median_ess(ess: &SymmetricMatrix) -> f64 {
    let p = ess.dim();
    let mut vals = Vec::with_capacity(p * (p + 1) / 2);
    for i in 0..p {
        for j in i..p {
            vals.push(ess.get(i, j));
        }
    }
    diagnostics::median(&vals).expect("ess matrix is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let sorted: Vec<f64> = (1..=100).map(|x| x as f64).collect();
        assert!((quantile(&sorted, 0.5) - 50.5).abs() < 1e-12);
        assert!((quantile(&sorted, 0.0) - 1.0).abs() < 1e-12);
        assert!((quantile(&sorted, 1.0) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn stored_chain_roundtrip() {
        let mut stored = StoredChain::with_capacity(3, 2);
        let a = SymmetricMatrix::from_fn(3, |i, j| (i + j) as f64);
        let mut b = a.clone();
        b.set(0, 2, -5.0);
        stored.push(&a);
        stored.push(&b);
        assert_eq!(stored.n_kept(), 2);
        assert_eq!(stored.draw(0), a);
        assert_eq!(stored.draw(1), b);
        assert_eq!(stored.entry_chain(2, 0), &[2.0, -5.0]);
    }

    #[test]
    fn config_rejects_zero_samples() {
        let cfg = SamplerConfig {
            n_samples: 0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(SamplerError::InvalidConfig(_))
        ));
    }

    #[test]
    fn truncation_disabled_for_infinite_bound() {
        // Eigenvalues far outside any finite bound are still accepted when
        // the bound is infinite, without any eigen computation.
        let sigma = SymmetricMatrix::from_diagonal(&[1e9, 1e-9]);
        assert_eq!(
            check_truncation(&sigma, f64::INFINITY).unwrap(),
            TruncationOutcome::Disabled
        );
        assert_eq!(
            check_truncation(&sigma, 100.0).unwrap(),
            TruncationOutcome::Rejected
        );
        let ok = SymmetricMatrix::identity(3);
        assert_eq!(
            check_truncation(&ok, 100.0).unwrap(),
            TruncationOutcome::Accepted
        );
    }
}
