//! Test-only numerical oracles, independent of the sampling code they
//! check: log-space Simpson quadrature for densities on (0, inf) and
//! Kolmogorov-Smirnov statistics.
//!
//! Each integration-test binary compiles this module separately and uses a
//! different subset of it.
#![allow(dead_code)]

/// A density on (0, inf) tabulated through t = ln x, normalized by
/// quadrature. Built from the log kernel alone.
pub struct LogSpaceDensity {
    t_grid: Vec<f64>,
    /// Normalized weights summing to 1 (Simpson weights times density).
    weights: Vec<f64>,
    /// Cumulative weights for CDF interpolation.
    cumulative: Vec<f64>,
}

impl LogSpaceDensity {
    /// Tabulate exp(log_kernel(x)) dx through the substitution x = e^t.
    /// `mode_t` is a point near the maximum of the transformed integrand;
    /// the window grows until the integrand has fallen 45 nats on both
    /// sides.
    pub fn from_log_kernel(log_kernel: impl Fn(f64) -> f64, mode_t: f64) -> Self {
        // Integrand in t includes the Jacobian e^t.
        let h = |t: f64| log_kernel(t.exp()) + t;
        let peak = h(mode_t);
        let drop = 45.0;
        let mut lo = mode_t - 1.0;
        let mut hi = mode_t + 1.0;
        let mut step = 1.0;
        while h(lo) > peak - drop && step < 1e6 {
            lo -= step;
            step *= 1.5;
        }
        step = 1.0;
        while h(hi) > peak - drop && step < 1e6 {
            hi += step;
            step *= 1.5;
        }
        let n = 32_768usize; // panels; n+1 points, n even
        let dt = (hi - lo) / n as f64;
        let t_grid: Vec<f64> = (0..=n).map(|i| lo + i as f64 * dt).collect();
        let mut weights: Vec<f64> = t_grid
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let simpson = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                simpson * (h(t) - peak).exp()
            })
            .collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        LogSpaceDensity {
            t_grid,
            weights,
            cumulative,
        }
    }

    /// E[X^k] under the tabulated density.
    pub fn moment(&self, k: i32) -> f64 {
        self.t_grid
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| (k as f64 * t).exp() * w)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2) - m * m
    }

    /// CDF at x by interpolation on the cumulative grid.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let t = x.ln();
        if t <= self.t_grid[0] {
            return 0.0;
        }
        if t >= *self.t_grid.last().unwrap() {
            return 1.0;
        }
        let idx = self.t_grid.partition_point(|&g| g < t);
        let (t0, t1) = (self.t_grid[idx - 1], self.t_grid[idx]);
        let (c0, c1) = (self.cumulative[idx - 1], self.cumulative[idx]);
        let frac = (t - t0) / (t1 - t0);
        (c0 + frac * (c1 - c0)).clamp(0.0, 1.0)
    }
}

/// GIG(q, a, b) log kernel, x^{q-1} exp(-(a x + b/x)/2), with the mode of
/// the t-space integrand computed in closed form.
pub fn gig_oracle(q: f64, a: f64, b: f64) -> LogSpaceDensity {
    let s = (q * q + a * b).sqrt();
    // e^t at the maximum of q t - (a e^t + b e^-t)/2 solves the quadratic
    // -(a/2) y^2 + q y + b/2 = 0; written without cancellation.
    let y = if q >= 0.0 { (q + s) / a } else { b / (s - q) };
    LogSpaceDensity::from_log_kernel(
        move |x: f64| (q - 1.0) * x.ln() - 0.5 * (a * x + b / x),
        y.ln(),
    )
}

/// Gamma(shape, rate) log kernel with its t-space mode.
pub fn gamma_oracle(shape: f64, rate: f64) -> LogSpaceDensity {
    LogSpaceDensity::from_log_kernel(
        move |x: f64| (shape - 1.0) * x.ln() - rate * x,
        (shape / rate).ln(),
    )
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// Empirical quantile of a sample (nearest-rank).
pub fn empirical_quantile(sample: &[f64], q: f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let idx = ((q * s.len() as f64) as usize).min(s.len() - 1);
    s[idx]
}

pub fn mean_and_sd(sample: &[f64]) -> (f64, f64) {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
