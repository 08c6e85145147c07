//! Mixing benchmark: per-entry effective sample sizes of both samplers on
//! one C1 dataset at matched retained-sample counts.

use std::fmt::Write as _;
use std::time::Instant;

use sparsecov::chain::median_ess;
use sparsecov::datagen::c1_covariance;
use sparsecov::diagnostics::seconds_per_kilo_ess;
use sparsecov::shrinkage::run_shrinkage_chain;
use sparsecov::sssl::run_sssl_chain;

use crate::config::ExperimentConfig;
use crate::csvio::fmt_f64;
use crate::error::CliError;
use crate::experiments::{chain_seed, simulate};
use crate::report::{aligned_table, RunDir};

pub fn run(config: &ExperimentConfig) -> Result<(), CliError> {
    let run_dir = RunDir::create(config)?;
    let truth = c1_covariance();
    let p = truth.dim();
    let n = config.n.unwrap_or(250);
    let data = simulate(&truth, n, config.seed, 0)?;

    let shrink_hyper = config.shrinkage_hyper(n, p);
    let t0 = Instant::now();
    let shrink = run_shrinkage_chain(
        &data,
        &shrink_hyper,
        &config.sampler_config(chain_seed(config.seed, 0)),
    )?;
    let shrink_wall = t0.elapsed().as_secs_f64();

    let sssl_hyper = config.sssl_hyper(p);
    let t0 = Instant::now();
    let sssl = run_sssl_chain(
        &data,
        &sssl_hyper,
        &config.sampler_config(chain_seed(config.seed, 1)),
    )?;
    let sssl_wall = t0.elapsed().as_secs_f64();

    // Plot-ready long format over the unique entries.
    let mut long_csv = String::from("i,j,sampler,ess\n");
    let mut entries = |name: &str, ess: &sparsecov::matrix::SymmetricMatrix| {
        let mut vals = Vec::new();
        for i in 0..p {
            for j in i..p {
                let _ = writeln!(
                    long_csv,
                    "{},{},{},{}",
                    i + 1,
                    j + 1,
                    name,
                    fmt_f64(ess.get(i, j))
                );
                vals.push(ess.get(i, j));
            }
        }
        vals
    };
    let shrink_ess = entries("shrinkage", &shrink.summary.ess);
    let sssl_ess = entries("sssl", &sssl.summary.ess);
    run_dir.write("ess_long.csv", &long_csv)?;

    let med_shrink = median_ess(&shrink.summary.ess);
    let med_sssl = median_ess(&sssl.summary.ess);
    let ratio = med_shrink / med_sssl;
    let mut summary_csv = String::from("metric,value\n");
    let _ = writeln!(summary_csv, "retained_samples,{}", shrink.summary.n_kept);
    let _ = writeln!(summary_csv, "median_ess_shrinkage,{}", fmt_f64(med_shrink));
    let _ = writeln!(summary_csv, "median_ess_sssl,{}", fmt_f64(med_sssl));
    let _ = writeln!(
        summary_csv,
        "ess_ratio_shrinkage_over_sssl,{}",
        fmt_f64(ratio)
    );
    run_dir.write("summary.csv", &summary_csv)?;

    let mut timing = String::new();
    let _ = writeln!(timing, "wall_seconds_shrinkage = {shrink_wall:.3}");
    let _ = writeln!(timing, "wall_seconds_sssl = {sssl_wall:.3}");
    let _ = writeln!(
        timing,
        "seconds_per_1000_ess_shrinkage = {:.3}",
        seconds_per_kilo_ess(shrink_wall, &shrink_ess)?
    );
    let _ = writeln!(
        timing,
        "seconds_per_1000_ess_sssl = {:.3}",
        seconds_per_kilo_ess(sssl_wall, &sssl_ess)?
    );
    run_dir.write("timing.txt", &timing)?;

    let table = aligned_table(
        &["sampler", "median ESS", "retained"],
        &[
            vec![
                "shrinkage".into(),
                format!("{med_shrink:.1}"),
                shrink.summary.n_kept.to_string(),
            ],
            vec![
                "sssl".into(),
                format!("{med_sssl:.1}"),
                sssl.summary.n_kept.to_string(),
            ],
        ],
    );
    run_dir.write(
        "table.txt",
        &format!("{table}ratio shrinkage/sssl = {ratio:.3}\n"),
    )?;
    println!(
        "ess-bench: n = {n}\n{table}ratio shrinkage/sssl = {ratio:.3}\n{timing}reports in {}",
        run_dir.path().display()
    );
    Ok(())
}
