//! Run-directory output. Every experiment writes into one directory:
//! `config.txt` (the resolved configuration), one or more deterministic
//! CSV reports, an aligned-text summary table, and `timing.txt`. Timing is
//! the only non-deterministic artifact and lives outside the CSVs so that
//! reports are byte-identical across reruns with the same config and seed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub struct RunDir {
    dir: PathBuf,
}

impl RunDir {
    pub fn create(config: &ExperimentConfig) -> Result<Self, CliError> {
        fs::create_dir_all(&config.out_dir)?;
        let run = RunDir {
            dir: config.out_dir.clone(),
        };
        run.write("config.txt", &config.echo())?;
        Ok(run)
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&self, name: &str, content: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), content)?;
        Ok(())
    }
}

/// Mean and standard error (sd / sqrt(n)) of replication results; the SE is
/// `None` for fewer than two values.
pub fn mean_se(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

/// Render an aligned text table from rows of cells.
pub fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let render = |cells: &[String], widths: &[usize], out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{:>width$}", cell, width = widths[i]);
        }
        out.push('\n');
    };
    render(
        &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        &widths,
        &mut out,
    );
    for row in rows {
        render(row, &widths, &mut out);
    }
    out
}

/// `mean (se)` cell used by the Table-1/2 style reports.
pub fn mean_se_cell(mean: f64, se: Option<f64>) -> String {
    match se {
        Some(se) => format!("{mean:.3} ({se:.3})"),
        None => format!("{mean:.3} (NA)"),
    }
}
