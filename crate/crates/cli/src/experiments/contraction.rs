//! Empirical posterior contraction study: the posterior expectation of the
//! squared Frobenius distance to a fixed sparse truth, as the sample size
//! grows, against the (p + s0) log p / n reference rate.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use sparsecov::chain::SamplerConfig;
use sparsecov::datagen::{c1_covariance, c1_nonzero_offdiagonals};
use sparsecov::shrinkage::run_shrinkage_chain;

use crate::config::ExperimentConfig;
use crate::csvio::fmt_f64;
use crate::error::CliError;
use crate::experiments::{chain_seed, simulate};
use crate::report::{aligned_table, RunDir};

pub const N_GRID: [usize; 4] = [100, 200, 400, 800];

/// Posterior mean of ||Sigma - Sigma0||_F^2 over the retained draws,
/// computed from the stored per-entry chains.
fn posterior_frob_sq(
    chain: &sparsecov::chain::StoredChain,
    truth: &sparsecov::matrix::SymmetricMatrix,
) -> f64 {
    let p = truth.dim();
    let n_kept = chain.n_kept() as f64;
    let mut total = 0.0;
    for i in 0..p {
        for j in i..p {
            let weight = if i == j { 1.0 } else { 2.0 };
            let t = truth.get(i, j);
            let sq: f64 = chain
                .entry_chain(i, j)
                .iter()
                .map(|&x| (x - t) * (x - t))
                .sum();
            total += weight * sq / n_kept;
        }
    }
    total
}

/// Least-squares slope of ln(err) on ln(n).
pub fn log_log_slope(ns: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|&e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn run(config: &ExperimentConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let run_dir = RunDir::create(config)?;
    let truth = c1_covariance();
    let p = truth.dim();
    let s0 = c1_nonzero_offdiagonals();
    let seeds = config.replications;

    // [seed][n_idx] -> posterior mean squared Frobenius error
    let per_seed: Vec<Result<Vec<f64>, CliError>> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let mut errs = Vec::with_capacity(N_GRID.len());
            for (ni, &n) in N_GRID.iter().enumerate() {
                let tag = (s * 8 + ni) as u64;
                let data = simulate(&truth, n, config.seed, tag)?;
                let hyper = config.shrinkage_hyper(n, p);
                let chain_cfg = SamplerConfig {
                    store_full_chain: true,
                    ..config.sampler_config(chain_seed(config.seed, tag))
                };
                let run = run_shrinkage_chain(&data, &hyper, &chain_cfg)?;
                let chain = run.chain.expect("chain storage was requested");
                errs.push(posterior_frob_sq(&chain, &truth));
            }
            Ok(errs)
        })
        .collect();
    let per_seed: Vec<Vec<f64>> = per_seed.into_iter().collect::<Result<_, _>>()?;

    let mut results_csv = String::from("seed,n,posterior_frob_sq\n");
    let mut slopes_csv = String::from("seed,slope\n");
    let mut slopes = Vec::with_capacity(seeds);
    for (s, errs) in per_seed.iter().enumerate() {
        for (&n, &e) in N_GRID.iter().zip(errs) {
            let _ = writeln!(results_csv, "{s},{n},{}", fmt_f64(e));
        }
        let slope = log_log_slope(&N_GRID, errs);
        slopes.push(slope);
        let _ = writeln!(slopes_csv, "{s},{}", fmt_f64(slope));
    }
    run_dir.write("results.csv", &results_csv)?;
    run_dir.write("slopes.csv", &slopes_csv)?;

    let mean_errs: Vec<f64> = (0..N_GRID.len())
        .map(|ni| per_seed.iter().map(|errs| errs[ni]).sum::<f64>() / seeds as f64)
        .collect();
    let theory: Vec<f64> = N_GRID
        .iter()
        .map(|&n| (p + s0) as f64 * (p as f64).ln() / n as f64)
        .collect();
    let mut summary_csv = String::from("n,mean_posterior_frob_sq,theory_rate\n");
    let mut table_rows = Vec::new();
    for ((&n, &e), &t) in N_GRID.iter().zip(&mean_errs).zip(&theory) {
        let _ = writeln!(summary_csv, "{n},{},{}", fmt_f64(e), fmt_f64(t));
        table_rows.push(vec![n.to_string(), format!("{e:.4}"), format!("{t:.4}")]);
    }
    let mean_slope = log_log_slope(&N_GRID, &mean_errs);
    let decreasing_seeds = per_seed
        .iter()
        .filter(|errs| errs.windows(2).all(|w| w[1] < w[0]))
        .count();
    let _ = writeln!(summary_csv, "slope_of_means,{},", fmt_f64(mean_slope));
    let _ = writeln!(
        summary_csv,
        "seeds_with_monotone_decrease,{decreasing_seeds},"
    );
    run_dir.write("summary.csv", &summary_csv)?;

    let table = aligned_table(
        &["n", "E||Sigma-Sigma0||_F^2", "(p+s0)log(p)/n"],
        &table_rows,
    );
    let footer = format!(
        "slope of means = {mean_slope:.3}; {decreasing_seeds}/{seeds} seeds strictly decreasing\n"
    );
    run_dir.write("table.txt", &format!("{table}{footer}"))?;
    run_dir.write(
        "timing.txt",
        &format!("wall_seconds = {:.3}\n", start.elapsed().as_secs_f64()),
    )?;
    println!(
        "contraction: p = {p}, s0 = {s0}, {seeds} seeds\n{table}{footer}reports in {}",
        run_dir.path().display()
    );
    Ok(())
}
