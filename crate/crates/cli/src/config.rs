//! Experiment configuration: defaults, an optional flat `key = value` file,
//! and command-line flags, resolved in that order (flags win). The resolved
//! configuration is echoed verbatim into every run directory so a report is
//! a pure function of (config, seed).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sparsecov::chain::SamplerConfig;
use sparsecov::shrinkage::ShrinkageHyperparams;
use sparsecov::sssl::SsslHyperparams;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerChoice {
    Shrinkage,
    Sssl,
    Sample,
}

impl SamplerChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "shrinkage" => Ok(SamplerChoice::Shrinkage),
            "sssl" => Ok(SamplerChoice::Sssl),
            "sample" => Ok(SamplerChoice::Sample),
            other => Err(CliError::Config(format!(
                "unknown sampler '{other}' (expected shrinkage|sssl|sample)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SamplerChoice::Shrinkage => "shrinkage",
            SamplerChoice::Sssl => "sssl",
            SamplerChoice::Sample => "sample",
        }
    }
}

/// Partial configuration collected from one source (file or flags); `None`
/// fields defer to the next source down.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub quick: Option<bool>,
    pub replications: Option<usize>,
    pub burn_in: Option<usize>,
    pub n_samples: Option<usize>,
    pub thin: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub tau1_sq: Option<f64>,
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
    pub nu0_sq: Option<f64>,
    pub nu1_sq: Option<f64>,
    pub pi_mix: Option<f64>,
    pub data: Option<PathBuf>,
    pub k_features: Option<usize>,
    pub sampler: Option<SamplerChoice>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub center: Option<bool>,
    pub welch: Option<bool>,
    pub select_full_data: Option<bool>,
    pub random_scan: Option<bool>,
}

impl Overrides {
    /// Parse a flat `key = value` file. Unknown keys are configuration
    /// errors; '#' starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut ov = Overrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}: line {}: expected 'key = value'",
                    path.display(),
                    idx + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                CliError::Config(format!(
                    "{}: line {}: invalid {what} '{value}' for key '{key}'",
                    path.display(),
                    idx + 1
                ))
            };
            match key {
                "seed" => ov.seed = Some(value.parse().map_err(|_| bad("integer"))?),
                "out" => ov.out_dir = Some(PathBuf::from(value)),
                "quick" => ov.quick = Some(parse_bool(value).ok_or_else(|| bad("bool"))?),
                "replications" => {
                    ov.replications = Some(value.parse().map_err(|_| bad("integer"))?)
                }
                "burn_in" => ov.burn_in = Some(value.parse().map_err(|_| bad("integer"))?),
                "n_samples" => ov.n_samples = Some(value.parse().map_err(|_| bad("integer"))?),
                "thin" => ov.thin = Some(value.parse().map_err(|_| bad("integer"))?),
                "a" => ov.a = Some(value.parse().map_err(|_| bad("number"))?),
                "b" => ov.b = Some(value.parse().map_err(|_| bad("number"))?),
                "tau1_sq" => ov.tau1_sq = Some(parse_f64_or_auto(value).ok_or_else(|| bad("number"))?),
                "lambda" => ov.lambda = Some(value.parse().map_err(|_| bad("number"))?),
                "tau" => ov.tau = Some(parse_tau(value).ok_or_else(|| bad("number"))?),
                "nu0_sq" => ov.nu0_sq = Some(value.parse().map_err(|_| bad("number"))?),
                "nu1_sq" => ov.nu1_sq = Some(value.parse().map_err(|_| bad("number"))?),
                "pi_mix" => ov.pi_mix = Some(parse_f64_or_auto(value).ok_or_else(|| bad("number"))?),
                "data" => ov.data = Some(PathBuf::from(value)),
                "k_features" => ov.k_features = Some(value.parse().map_err(|_| bad("integer"))?),
                "sampler" => ov.sampler = Some(SamplerChoice::parse(value)?),
                "n" => ov.n = Some(value.parse().map_err(|_| bad("integer"))?),
                "mu" => ov.mu = Some(value.parse().map_err(|_| bad("number"))?),
                "center" => ov.center = Some(parse_bool(value).ok_or_else(|| bad("bool"))?),
                "welch" => ov.welch = Some(parse_bool(value).ok_or_else(|| bad("bool"))?),
                "select_full_data" => {
                    ov.select_full_data = Some(parse_bool(value).ok_or_else(|| bad("bool"))?)
                }
                "random_scan" => {
                    ov.random_scan = Some(parse_bool(value).ok_or_else(|| bad("bool"))?)
                }
                other => {
                    return Err(CliError::Config(format!(
                        "{}: line {}: unknown key '{other}'",
                        path.display(),
                        idx + 1
                    )))
                }
            }
        }
        Ok(ov)
    }

    fn merge_over(self, base: Overrides) -> Overrides {
        Overrides {
            seed: self.seed.or(base.seed),
            out_dir: self.out_dir.or(base.out_dir),
            quick: self.quick.or(base.quick),
            replications: self.replications.or(base.replications),
            burn_in: self.burn_in.or(base.burn_in),
            n_samples: self.n_samples.or(base.n_samples),
            thin: self.thin.or(base.thin),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            tau1_sq: self.tau1_sq.or(base.tau1_sq),
            lambda: self.lambda.or(base.lambda),
            tau: self.tau.or(base.tau),
            nu0_sq: self.nu0_sq.or(base.nu0_sq),
            nu1_sq: self.nu1_sq.or(base.nu1_sq),
            pi_mix: self.pi_mix.or(base.pi_mix),
            data: self.data.or(base.data),
            k_features: self.k_features.or(base.k_features),
            sampler: self.sampler.or(base.sampler),
            n: self.n.or(base.n),
            mu: self.mu.or(base.mu),
            center: self.center.or(base.center),
            welch: self.welch.or(base.welch),
            select_full_data: self.select_full_data.or(base.select_full_data),
            random_scan: self.random_scan.or(base.random_scan),
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

fn parse_f64_or_auto(s: &str) -> Option<f64> {
    if s == "auto" {
        Some(f64::NAN) // sentinel resolved against the data dimensions
    } else {
        s.parse().ok().filter(|v: &f64| v.is_finite())
    }
}

fn parse_tau(s: &str) -> Option<f64> {
    if s == "inf" || s == "infinity" {
        Some(f64::INFINITY)
    } else {
        s.parse().ok()
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub quick: bool,
    pub replications: usize,
    pub burn_in: usize,
    pub n_samples: usize,
    pub thin: usize,
    pub a: f64,
    pub b: f64,
    /// NaN means "derive 1/(n p^4) from the data dimensions".
    pub tau1_sq: f64,
    pub lambda: f64,
    pub tau: f64,
    pub nu0_sq: f64,
    pub nu1_sq: f64,
    /// NaN means "derive 2/(p-1) from the data dimensions".
    pub pi_mix: f64,
    pub data: Option<PathBuf>,
    pub k_features: usize,
    pub sampler: Option<SamplerChoice>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub center: bool,
    pub welch: bool,
    pub select_full_data: bool,
    pub random_scan: bool,
}

impl ExperimentConfig {
    /// Resolve defaults <- quick profile <- config file <- flags.
    pub fn resolve(
        experiment: &str,
        file: Option<Overrides>,
        flags: Overrides,
    ) -> Result<Self, CliError> {
        let merged = flags.merge_over(file.unwrap_or_default());
        let quick = merged.quick.unwrap_or(false);
        let (def_burn, def_samples, def_reps) = if quick {
            (500, 500, 5)
        } else {
            (5000, 5000, 50)
        };
        let cfg = ExperimentConfig {
            experiment: experiment.to_string(),
            seed: merged.seed.unwrap_or(1729),
            out_dir: merged
                .out_dir
                .unwrap_or_else(|| PathBuf::from(format!("sparsecov-out/{experiment}"))),
            quick,
            replications: merged.replications.unwrap_or(def_reps),
            burn_in: merged.burn_in.unwrap_or(def_burn),
            n_samples: merged.n_samples.unwrap_or(def_samples),
            thin: merged.thin.unwrap_or(1),
            a: merged.a.unwrap_or(0.5),
            b: merged.b.unwrap_or(0.5),
            tau1_sq: merged.tau1_sq.unwrap_or(f64::NAN),
            lambda: merged.lambda.unwrap_or(1.0),
            tau: merged.tau.unwrap_or(f64::INFINITY),
            nu0_sq: merged.nu0_sq.unwrap_or(0.0004),
            nu1_sq: merged.nu1_sq.unwrap_or(1.0),
            pi_mix: merged.pi_mix.unwrap_or(f64::NAN),
            data: merged.data,
            k_features: merged.k_features.unwrap_or(50),
            sampler: merged.sampler,
            n: merged.n,
            mu: merged.mu,
            center: merged.center.unwrap_or(false),
            welch: merged.welch.unwrap_or(false),
            select_full_data: merged.select_full_data.unwrap_or(false),
            random_scan: merged.random_scan.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.replications == 0 {
            return Err(CliError::Config("replications must be at least 1".into()));
        }
        if self.n_samples == 0 {
            return Err(CliError::Config("n_samples must be at least 1".into()));
        }
        if self.thin == 0 {
            return Err(CliError::Config("thin must be at least 1".into()));
        }
        if self.k_features == 0 {
            return Err(CliError::Config("k_features must be at least 1".into()));
        }
        Ok(())
    }

    /// Shrinkage hyperparameters for a dataset of the given dimensions;
    /// `tau1_sq = auto` resolves to 1/(n p^4).
    pub fn shrinkage_hyper(&self, n: usize, p: usize) -> ShrinkageHyperparams {
        let mut h = ShrinkageHyperparams::default_for(n, p);
        h.a = self.a;
        h.b = self.b;
        h.lambda = self.lambda;
        h.tau = self.tau;
        if !self.tau1_sq.is_nan() {
            h.tau1_sq = self.tau1_sq;
        }
        h
    }

    /// SSSL hyperparameters; `pi_mix = auto` resolves to 2/(p-1).
    pub fn sssl_hyper(&self, p: usize) -> SsslHyperparams {
        let mut h = SsslHyperparams::default_for(p);
        h.nu0_sq = self.nu0_sq;
        h.nu1_sq = self.nu1_sq;
        h.lambda = self.lambda;
        if !self.pi_mix.is_nan() {
            h.pi_mix = self.pi_mix;
        }
        h
    }

    /// Chain budget with a per-run derived seed.
    pub fn sampler_config(&self, seed: u64) -> SamplerConfig {
        SamplerConfig {
            burn_in: self.burn_in,
            n_samples: self.n_samples,
            thin: self.thin,
            seed,
            store_full_chain: false,
            random_scan: self.random_scan,
        }
    }

    /// The resolved configuration as sorted `key = value` lines; written at
    /// the head of every run directory.
    pub fn echo(&self) -> String {
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("experiment", self.experiment.clone());
        kv.insert("seed", self.seed.to_string());
        kv.insert("out", self.out_dir.display().to_string());
        kv.insert("quick", self.quick.to_string());
        kv.insert("replications", self.replications.to_string());
        kv.insert("burn_in", self.burn_in.to_string());
        kv.insert("n_samples", self.n_samples.to_string());
        kv.insert("thin", self.thin.to_string());
        kv.insert("a", trim_float(self.a));
        kv.insert("b", trim_float(self.b));
        kv.insert(
            "tau1_sq",
            if self.tau1_sq.is_nan() {
                "auto".into()
            } else {
                trim_float(self.tau1_sq)
            },
        );
        kv.insert("lambda", trim_float(self.lambda));
        kv.insert(
            "tau",
            if self.tau.is_finite() {
                trim_float(self.tau)
            } else {
                "inf".into()
            },
        );
        kv.insert("nu0_sq", trim_float(self.nu0_sq));
        kv.insert("nu1_sq", trim_float(self.nu1_sq));
        kv.insert(
            "pi_mix",
            if self.pi_mix.is_nan() {
                "auto".into()
            } else {
                trim_float(self.pi_mix)
            },
        );
        kv.insert(
            "data",
            self.data
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "none".into()),
        );
        kv.insert("k_features", self.k_features.to_string());
        kv.insert(
            "sampler",
            self.sampler.map(|s| s.name().to_string()).unwrap_or_else(|| "all".into()),
        );
        kv.insert(
            "n",
            self.n.map(|v| v.to_string()).unwrap_or_else(|| "all".into()),
        );
        kv.insert(
            "mu",
            self.mu.map(trim_float).unwrap_or_else(|| "all".into()),
        );
        kv.insert("center", self.center.to_string());
        kv.insert("welch", self.welch.to_string());
        kv.insert("select_full_data", self.select_full_data.to_string());
        kv.insert("random_scan", self.random_scan.to_string());
        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

// Config echo uses the shortest representation that round-trips.
fn trim_float(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_file_which_overrides_defaults() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# test config\nseed = 7\nburn_in = 100\nlambda = 2.5").unwrap();
        let file = Overrides::from_file(f.path()).unwrap();
        let flags = Overrides {
            burn_in: Some(42),
            ..Overrides::default()
        };
        let cfg = ExperimentConfig::resolve("c1", Some(file), flags).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.burn_in, 42);
        assert_eq!(cfg.lambda, 2.5);
        assert_eq!(cfg.n_samples, 5000);
    }

    #[test]
    fn quick_profile_shrinks_budgets_but_yields_to_explicit_values() {
        let flags = Overrides {
            quick: Some(true),
            ..Overrides::default()
        };
        let cfg = ExperimentConfig::resolve("c1", None, flags).unwrap();
        assert_eq!((cfg.burn_in, cfg.n_samples, cfg.replications), (500, 500, 5));

        let flags = Overrides {
            quick: Some(true),
            replications: Some(2),
            ..Overrides::default()
        };
        let cfg = ExperimentConfig::resolve("c1", None, flags).unwrap();
        assert_eq!(cfg.replications, 2);
    }

    #[test]
    fn unknown_key_is_config_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "bogus = 1").unwrap();
        let err = Overrides::from_file(f.path()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn echo_contains_every_key_and_auto_sentinels() {
        let cfg = ExperimentConfig::resolve("c2", None, Overrides::default()).unwrap();
        let echo = cfg.echo();
        assert!(echo.contains("tau1_sq = auto"));
        assert!(echo.contains("pi_mix = auto"));
        assert!(echo.contains("tau = inf"));
        assert!(echo.contains("experiment = c2"));
    }

    #[test]
    fn hyperparameter_resolution_uses_dimensions() {
        let cfg = ExperimentConfig::resolve("c1", None, Overrides::default()).unwrap();
        let h = cfg.shrinkage_hyper(250, 12);
        assert!((h.tau1_sq - 1.0 / (250.0 * 20736.0)).abs() < 1e-18);
        let s = cfg.sssl_hyper(12);
        assert!((s.pi_mix - 2.0 / 11.0).abs() < 1e-15);
    }
}
