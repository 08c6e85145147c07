//! Blocked Gibbs sampler for the beta-mixture shrinkage prior.
//!
//! The model is X_i | Sigma ~ N_p(0, Sigma) with, for j < k,
//!
//!   sigma_jk | rho_jk ~ N(0, (rho_jk / (1 - rho_jk)) tau1^2),
//!   rho_jk ~ Beta(a, b),
//!   sigma_jj ~ Gamma(1, lambda / 2),
//!
//! restricted to positive definite matrices (optionally to eigenvalues in
//! [1/tau, tau]). At the default a = b = 1/2 the scale of sigma_jk carries a
//! half-Cauchy prior, the horseshoe-type choice.
//!
//! Writing phi_jk = rho_jk / (1 - rho_jk), the prior variance of sigma_jk is
//! phi_jk tau1^2; these products populate the matrix V = (v_jk^2) whose
//! column blocks are the diagonal D of prior variances in the column update.
//! V stores variances, so "diag(v_12^{-1})" is the elementwise reciprocal of
//! prior variances. This is the one reading that makes the u-conditional
//! precision B + D^{-1} consistent across the two published forms of the
//! update, and it is fixed throughout this crate.
//!
//! One sweep cycles the blocked column update over j = 1..p and then
//! refreshes the local shrinkage pair (psi_jk, phi_jk) for every j < k:
//!
//!   psi_jk | rest ~ Gamma(a + b, phi_jk + 1),
//!   phi_jk | rest ~ GIG(a - 1/2, 2 psi_jk, sigma_jk^2 / tau1^2).
//!
//! The beta variable rho never appears in the loop; the (psi, phi)
//! augmentation replaces it.

use crate::chain::{
    run_chain, ChainRun, CovarianceSampler, SamplerConfig, SamplerError, SweepStats,
};
use crate::column::{update_column_with_priors, ColumnDraw};
use crate::dist::{sample_gamma, RngHandle};
use crate::gig::{sample_gig, GigParams};
use crate::matrix::{ColumnPartition, DataMatrix, SymmetricMatrix};

/// Floor for the GIG b argument when an off-diagonal entry is exactly zero
/// (or its square underflows).
pub const GIG_B_CLAMP: f64 = 1e-300;

/// Ridge added to the diagonal at initialization.
const INIT_RIDGE: f64 = 1e-6;

/// Prior knobs of the shrinkage sampler.
#[derive(Debug, Clone, Copy)]
pub struct ShrinkageHyperparams {
    /// Global shrinkage variance tau_1^2.
    pub tau1_sq: f64,
    /// Beta parameters of the mixing weight; a = b = 1/2 is the
    /// half-Cauchy default.
    pub a: f64,
    pub b: f64,
    /// Rate of the Gamma(1, lambda/2) prior on diagonal entries.
    pub lambda: f64,
    /// Eigenvalue truncation bound; infinity disables the check, the
    /// practical default.
    pub tau: f64,
}

impl ShrinkageHyperparams {
    /// Defaults tied to the data size: a = b = 1/2, tau1^2 = 1/(n p^4),
    /// lambda = 1, tau = infinity.
    pub fn default_for(n: usize, p: usize) -> Self {
        ShrinkageHyperparams {
            tau1_sq: 1.0 / (n as f64 * (p as f64).powi(4)),
            a: 0.5,
            b: 0.5,
            lambda: 1.0,
            tau: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        let ok = self.tau1_sq > 0.0
            && self.tau1_sq.is_finite()
            && self.a > 0.0
            && self.a.is_finite()
            && self.b > 0.0
            && self.b.is_finite()
            && self.lambda > 0.0
            && self.lambda.is_finite();
        if !ok {
            return Err(SamplerError::InvalidConfig(format!(
                "shrinkage hyperparameters must be positive and finite: {self:?}"
            )));
        }
        if self.tau.is_finite() && self.tau <= 1.0 {
            return Err(SamplerError::InvalidConfig(format!(
                "truncation bound tau must exceed 1, got {}",
                self.tau
            )));
        }
        Ok(())
    }
}

/// Current draw and latent local-shrinkage matrices.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub sigma: SymmetricMatrix,
    /// phi_jk = rho_jk / (1 - rho_jk); diagonal unused.
    pub phi: SymmetricMatrix,
    /// Auxiliary psi_jk; diagonal unused.
    pub psi: SymmetricMatrix,
    pub iteration: u64,
    /// Columns whose sample variance was numerically zero at
    /// initialization; the ridge keeps them valid but estimates for them
    /// carry no information.
    pub degenerate_columns: Vec<usize>,
}

/// State plus the cached scatter matrix and seeded stream produced by
/// [`init_chain`].
#[derive(Debug, Clone)]
pub struct ChainInit {
    pub state: ChainState,
    pub scatter: SymmetricMatrix,
    pub rng: RngHandle,
}

/// Initialize a chain: Sigma = diag(sample variances) + 1e-6 I, all phi and
/// psi entries 1 (rho = 1/2), and S = X'X precomputed.
pub fn init_chain(
    data: &DataMatrix,
    hyper: &ShrinkageHyperparams,
    seed: u64,
) -> Result<ChainInit, SamplerError> {
    hyper.validate()?;
    let n = data.n_rows();
    let p = data.n_cols();
    if n < 2 || p < 2 {
        return Err(SamplerError::InvalidData(format!(
            "need at least 2 observations and 2 variables, got n={n}, p={p}"
        )));
    }
    let mut diag = vec![0.0f64; p];
    let mut degenerate = Vec::new();
    for j in 0..p {
        let var = data.column_variance(j);
        let mean = data.column_mean(j);
        if var <= 1e-12 * (1.0 + mean * mean) {
            degenerate.push(j);
        }
        diag[j] = var + INIT_RIDGE;
    }
    let sigma = SymmetricMatrix::from_diagonal(&diag);
    let ones = SymmetricMatrix::from_fn(p, |_, _| 1.0);
    Ok(ChainInit {
        state: ChainState {
            sigma,
            phi: ones.clone(),
            psi: ones,
            iteration: 0,
            degenerate_columns: degenerate,
        },
        scatter: data.scatter(),
        rng: RngHandle::new(seed),
    })
}

/// Blocked update of column `j`: draw u from its Gaussian conditional with
/// prior variances phi_jk tau1^2, draw the Schur complement v from its GIG
/// conditional, and write the column back.
pub fn update_column(
    state: &mut ChainState,
    j: usize,
    scatter: &SymmetricMatrix,
    n: usize,
    hyper: &ShrinkageHyperparams,
    rng: &mut RngHandle,
) -> Result<ColumnDraw, SamplerError> {
    let spart = scatter.partition(j)?;
    update_column_cached(state, j, &spart, n, hyper, rng)
}

fn update_column_cached(
    state: &mut ChainState,
    j: usize,
    scatter_part: &ColumnPartition,
    n: usize,
    hyper: &ShrinkageHyperparams,
    rng: &mut RngHandle,
) -> Result<ColumnDraw, SamplerError> {
    let p = state.sigma.dim();
    let mut prior_vars = Vec::with_capacity(p - 1);
    for a in 0..(p - 1) {
        let ia = if a < j { a } else { a + 1 };
        prior_vars.push(state.phi.get(ia, j) * hyper.tau1_sq);
    }
    update_column_with_priors(
        &mut state.sigma,
        scatter_part,
        n,
        j,
        &prior_vars,
        hyper.lambda,
        rng,
    )
}

/// Refresh (psi_jk, phi_jk) for every pair j < k. Returns the number of
/// GIG b-clamps applied. Both matrices stay exactly symmetric because each
/// pair is written once through the mirroring setter.
pub fn update_local_shrinkage(
    state: &mut ChainState,
    hyper: &ShrinkageHyperparams,
    rng: &mut RngHandle,
) -> Result<u64, SamplerError> {
    let p = state.sigma.dim();
    let mut clamps = 0u64;
    for j in 0..p {
        for k in (j + 1)..p {
            let psi = sample_gamma(hyper.a + hyper.b, state.phi.get(j, k) + 1.0, rng)?;
            state.psi.set(j, k, psi);
            let sigma_jk = state.sigma.get(j, k);
            let mut gig_b = sigma_jk * sigma_jk / hyper.tau1_sq;
            if gig_b < GIG_B_CLAMP {
                gig_b = GIG_B_CLAMP;
                clamps += 1;
            }
            let phi = sample_gig(
                &GigParams::new(hyper.a - 0.5, 2.0 * psi, gig_b)?,
                rng,
            );
            state.phi.set(j, k, phi);
        }
    }
    Ok(clamps)
}

/// One full sweep: column updates for j = 1..p in order, then one local
/// shrinkage pass.
pub fn sweep(
    state: &mut ChainState,
    scatter: &SymmetricMatrix,
    n: usize,
    hyper: &ShrinkageHyperparams,
    rng: &mut RngHandle,
) -> Result<SweepStats, SamplerError> {
    let p = state.sigma.dim();
    let mut stats = SweepStats::default();
    for j in 0..p {
        let draw = update_column(state, j, scatter, n, hyper, rng)?;
        if draw.chi_clamped {
            stats.chi_clamps += 1;
        }
    }
    stats.gig_b_clamps += update_local_shrinkage(state, hyper, rng)?;
    state.iteration += 1;
    Ok(stats)
}

/// The shrinkage kernel packaged for the chain driver, with per-column
/// scatter partitions cached once.
pub struct ShrinkageSampler {
    state: ChainState,
    scatter_parts: Vec<ColumnPartition>,
    n: usize,
    hyper: ShrinkageHyperparams,
    random_scan: bool,
}

impl ShrinkageSampler {
    pub fn new(
        data: &DataMatrix,
        hyper: &ShrinkageHyperparams,
        seed: u64,
    ) -> Result<(Self, RngHandle), SamplerError> {
        let init = init_chain(data, hyper, seed)?;
        let p = data.n_cols();
        let scatter_parts = (0..p)
            .map(|j| init.scatter.partition(j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((
            ShrinkageSampler {
                state: init.state,
                scatter_parts,
                n: data.n_rows(),
                hyper: *hyper,
                random_scan: false,
            },
            init.rng,
        ))
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn set_random_scan(&mut self, on: bool) {
        self.random_scan = on;
    }
}

impl CovarianceSampler for ShrinkageSampler {
    type Snapshot = ChainState;

    fn dim(&self) -> usize {
        self.state.sigma.dim()
    }

    fn sigma(&self) -> &SymmetricMatrix {
        &self.state.sigma
    }

    fn sweep(&mut self, rng: &mut RngHandle) -> Result<SweepStats, SamplerError> {
        let p = self.dim();
        let mut stats = SweepStats::default();
        for step in 0..p {
            let j = if self.random_scan {
                (rng.uniform() * p as f64) as usize % p
            } else {
                step
            };
            let draw = update_column_cached(
                &mut self.state,
                j,
                &self.scatter_parts[j],
                self.n,
                &self.hyper,
                rng,
            )?;
            if draw.chi_clamped {
                stats.chi_clamps += 1;
            }
        }
        stats.gig_b_clamps += update_local_shrinkage(&mut self.state, &self.hyper, rng)?;
        self.state.iteration += 1;
        Ok(stats)
    }

    fn snapshot(&self) -> ChainState {
        self.state.clone()
    }

    fn restore(&mut self, snapshot: &ChainState) {
        self.state = snapshot.clone();
    }

    fn truncation_bound(&self) -> f64 {
        self.hyper.tau
    }
}

/// Run a full shrinkage chain on `data` and summarize it.
pub fn run_shrinkage_chain(
    data: &DataMatrix,
    hyper: &ShrinkageHyperparams,
    config: &SamplerConfig,
) -> Result<ChainRun, SamplerError> {
    let (mut sampler, mut rng) = ShrinkageSampler::new(data, hyper, config.seed)?;
    sampler.set_random_scan(config.random_scan);
    run_chain(&mut sampler, config, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::sample_gaussian_data;

    fn standard_normal_data(n: usize, p: usize, seed: u64) -> DataMatrix {
        sample_gaussian_data(&SymmetricMatrix::identity(p), n, seed).unwrap()
    }

    #[test]
    fn init_diagonal_tracks_sample_variance() {
        let data = standard_normal_data(1000, 2, 8);
        let hyper = ShrinkageHyperparams::default_for(1000, 2);
        let init = init_chain(&data, &hyper, 0).unwrap();
        for j in 0..2 {
            let d = init.state.sigma.get(j, j);
            assert!((d - 1.0).abs() < 0.15, "diag {d}");
        }
        assert!(init.state.degenerate_columns.is_empty());
        assert!(init.state.sigma.is_positive_definite());
    }

    #[test]
    fn init_flags_constant_column() {
        let mut data = standard_normal_data(50, 3, 9);
        for i in 0..50 {
            data.set(i, 1, 4.0);
        }
        let hyper = ShrinkageHyperparams::default_for(50, 3);
        let init = init_chain(&data, &hyper, 0).unwrap();
        assert_eq!(init.state.degenerate_columns, vec![1]);
        let d = init.state.sigma.get(1, 1);
        assert!((d - 1e-6).abs() < 1e-8, "ridged diagonal {d}");
    }

    #[test]
    fn init_same_seed_identical_state() {
        let data = standard_normal_data(100, 4, 10);
        let hyper = ShrinkageHyperparams::default_for(100, 4);
        let a = init_chain(&data, &hyper, 5).unwrap();
        let b = init_chain(&data, &hyper, 5).unwrap();
        assert_eq!(a.state.sigma, b.state.sigma);
        assert_eq!(a.state.phi, b.state.phi);
        assert_eq!(a.state.psi, b.state.psi);
    }

    #[test]
    fn init_rejects_tiny_data() {
        let data = DataMatrix::new(1, 3, vec![1.0, 2.0, 3.0]).unwrap();
        let hyper = ShrinkageHyperparams::default_for(1, 3);
        assert!(matches!(
            init_chain(&data, &hyper, 0),
            Err(SamplerError::InvalidData(_))
        ));
    }

    #[test]
    fn local_shrinkage_positive_for_extreme_entries() {
        // a = b = 1/2 gives GIG order 0; draws must stay positive and
        // finite for entries across many magnitudes.
        let data = standard_normal_data(50, 3, 3);
        let hyper = ShrinkageHyperparams::default_for(50, 3);
        let mut init = init_chain(&data, &hyper, 1).unwrap();
        for &magnitude in &[1e-8, 1.0, 10.0] {
            init.state.sigma.set(0, 1, magnitude);
            init.state.sigma.set(0, 2, 0.0);
            update_local_shrinkage(&mut init.state, &hyper, &mut init.rng).unwrap();
            for j in 0..3 {
                for k in (j + 1)..3 {
                    let phi = init.state.phi.get(j, k);
                    let psi = init.state.psi.get(j, k);
                    assert!(phi > 0.0 && phi.is_finite());
                    assert!(psi > 0.0 && psi.is_finite());
                    assert_eq!(phi.to_bits(), init.state.phi.get(k, j).to_bits());
                }
            }
        }
    }

    #[test]
    fn exact_zero_entry_clamps_and_still_draws() {
        let data = standard_normal_data(50, 2, 4);
        let hyper = ShrinkageHyperparams::default_for(50, 2);
        let mut init = init_chain(&data, &hyper, 2).unwrap();
        init.state.sigma.set(0, 1, 0.0);
        let clamps = update_local_shrinkage(&mut init.state, &hyper, &mut init.rng).unwrap();
        assert_eq!(clamps, 1);
        assert!(init.state.phi.get(0, 1) > 0.0);
    }

    #[test]
    fn sweep_keeps_sigma_positive_definite() {
        let truth = SymmetricMatrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let data = sample_gaussian_data(&truth, 50, 21).unwrap();
        let hyper = ShrinkageHyperparams::default_for(50, 2);
        let mut init = init_chain(&data, &hyper, 7).unwrap();
        for _ in 0..5000 {
            sweep(&mut init.state, &init.scatter, 50, &hyper, &mut init.rng).unwrap();
            assert!(init.state.sigma.is_positive_definite());
        }
        assert_eq!(init.state.iteration, 5000);
    }

    #[test]
    fn fixed_seed_identical_trajectory() {
        let data = standard_normal_data(60, 3, 33);
        let hyper = ShrinkageHyperparams::default_for(60, 3);
        let mut a = init_chain(&data, &hyper, 11).unwrap();
        let mut b = init_chain(&data, &hyper, 11).unwrap();
        for _ in 0..50 {
            sweep(&mut a.state, &a.scatter, 60, &hyper, &mut a.rng).unwrap();
            sweep(&mut b.state, &b.scatter, 60, &hyper, &mut b.rng).unwrap();
        }
        assert_eq!(a.state.sigma, b.state.sigma);
        assert_eq!(a.state.phi, b.state.phi);
    }

    #[test]
    fn sampler_matches_free_sweep() {
        let data = standard_normal_data(40, 4, 12);
        let hyper = ShrinkageHyperparams::default_for(40, 4);
        let mut free = init_chain(&data, &hyper, 3).unwrap();
        let (mut sampler, mut rng) = ShrinkageSampler::new(&data, &hyper, 3).unwrap();
        for _ in 0..20 {
            sweep(&mut free.state, &free.scatter, 40, &hyper, &mut free.rng).unwrap();
            CovarianceSampler::sweep(&mut sampler, &mut rng).unwrap();
        }
        assert_eq!(free.state.sigma, sampler.state().sigma);
    }

    #[test]
    fn run_chain_rejects_zero_samples() {
        let data = standard_normal_data(30, 2, 1);
        let hyper = ShrinkageHyperparams::default_for(30, 2);
        let config = SamplerConfig {
            n_samples: 0,
            ..SamplerConfig::default()
        };
        assert!(matches!(
            run_shrinkage_chain(&data, &hyper, &config),
            Err(SamplerError::InvalidConfig(_))
        ));
    }

    #[test]
    fn posterior_mean_near_identity_at_large_n() {
        // Also exercises the GIG order 1 - n/2 at n = 20000.
        let p = 5;
        let n = 20_000;
        let data = standard_normal_data(n, p, 77);
        let hyper = ShrinkageHyperparams::default_for(n, p);
        let config = SamplerConfig {
            burn_in: 300,
            n_samples: 300,
            thin: 1,
            seed: 4,
            store_full_chain: false,
            random_scan: false,
        };
        let run = run_shrinkage_chain(&data, &hyper, &config).unwrap();
        for i in 0..p {
            for j in 0..p {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = run.summary.mean.get(i, j);
                assert!(
                    (got - want).abs() < 0.05,
                    "posterior mean ({i},{j}) = {got}"
                );
            }
        }
        assert_eq!(run.summary.n_kept, 300);
    }

    #[test]
    fn truncation_cap_errors_on_incompatible_bound() {
        // Sample variance near 5 cannot satisfy eigenvalues <= 1.0001.
        let truth = SymmetricMatrix::from_diagonal(&[5.0, 5.0]);
        let data = sample_gaussian_data(&truth, 200, 6).unwrap();
        let mut hyper = ShrinkageHyperparams::default_for(200, 2);
        hyper.tau = 1.0001;
        let config = SamplerConfig {
            burn_in: 10,
            n_samples: 10,
            thin: 1,
            seed: 9,
            store_full_chain: false,
            random_scan: false,
        };
        assert!(matches!(
            run_shrinkage_chain(&data, &hyper, &config),
            Err(SamplerError::TruncationCapExceeded { .. })
        ));
    }

    #[test]
    fn generous_truncation_accepts_c1_scale_data() {
        let truth = crate::datagen::c1_covariance();
        let data = sample_gaussian_data(&truth, 250, 13).unwrap();
        let mut hyper = ShrinkageHyperparams::default_for(250, 12);
        hyper.tau = 100.0;
        let config = SamplerConfig {
            burn_in: 100,
            n_samples: 900,
            thin: 1,
            seed: 2,
            store_full_chain: false,
            random_scan: false,
        };
        let run = run_shrinkage_chain(&data, &hyper, &config).unwrap();
        // acceptance rate > 0.99 over 1000 sweeps
        assert!(
            run.summary.truncation_rejections <= 10,
            "{} rejections",
            run.summary.truncation_rejections
        );
    }
}
