//! Chain diagnostics and estimation metrics: effective sample size,
//! root mean squared error, maximum norm, and timing normalization.

use thiserror::Error;

use crate::matrix::SymmetricMatrix;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("chain too short for ESS: need at least 2 values, got {got}")]
    ChainTooShort { got: usize },

    #[error("chain contains non-finite values")]
    NonFinite,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no ESS entries supplied")]
    EmptyEss,
}

/// Effective sample size of one retained scalar chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ess {
    /// N / (1 + 2 sum of autocorrelations), clamped to (0, N].
    pub value: f64,
    /// Set for zero-variance chains, which carry no autocorrelation
    /// information; `value` is then the chain length.
    pub degenerate: bool,
}

/// ESS with autocovariances by direct summation, truncated by Geyer's
/// initial positive sequence rule: consecutive pairs of autocorrelations
/// are accumulated while their sums stay positive.
pub fn effective_sample_size(chain: &[f64]) -> Result<Ess, DiagnosticsError> {
    let n = chain.len();
    if n < 2 {
        return Err(DiagnosticsError::ChainTooShort { got: n });
    }
    if chain.iter().any(|x| !x.is_finite()) {
        return Err(DiagnosticsError::NonFinite);
    }
    let mean = chain.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = chain.iter().map(|x| x - mean).collect();
    let gamma0 = dev.iter().map(|d| d * d).sum::<f64>() / n as f64;
    if gamma0 <= 0.0 {
        return Ok(Ess {
            value: n as f64,
            degenerate: true,
        });
    }
    let rho = |t: usize| -> f64 {
        let mut s = 0.0;
        for i in 0..(n - t) {
            s += dev[i] * dev[i + t];
        }
        s / n as f64 / gamma0
    };
    // Gamma_m = rho_{2m} + rho_{2m+1}; starting from the (rho_0 + rho_1)
    // pair, sum pairs while they remain positive. tau = 2 sum Gamma_m - 1.
    let mut pair_sum = 0.0;
    let mut t = 0;
    while t + 1 < n {
        let g = rho(t) + rho(t + 1);
        if g <= 0.0 {
            break;
        }
        pair_sum += g;
        t += 2;
    }
    let tau = (2.0 * pair_sum - 1.0).max(f64::MIN_POSITIVE);
    let value = (n as f64 / tau).min(n as f64).max(f64::MIN_POSITIVE);
    Ok(Ess {
        value,
        degenerate: false,
    })
}

/// Frobenius norm of the difference divided by the dimension.
pub fn rmse(
    estimate: &SymmetricMatrix,
    truth: &SymmetricMatrix,
) -> Result<f64, DiagnosticsError> {
    if estimate.dim() != truth.dim() {
        return Err(DiagnosticsError::DimensionMismatch {
            left: estimate.dim(),
            right: truth.dim(),
        });
    }
    let p = estimate.dim();
    let mut s = 0.0;
    for i in 0..p {
        for j in 0..p {
            let d = estimate.get(i, j) - truth.get(i, j);
            s += d * d;
        }
    }
    Ok(s.sqrt() / p as f64)
}

/// Entrywise maximum absolute deviation.
pub fn mnorm(
    estimate: &SymmetricMatrix,
    truth: &SymmetricMatrix,
) -> Result<f64, DiagnosticsError> {
    if estimate.dim() != truth.dim() {
        return Err(DiagnosticsError::DimensionMismatch {
            left: estimate.dim(),
            right: truth.dim(),
        });
    }
    let p = estimate.dim();
    let mut m = 0.0f64;
    for i in 0..p {
        for j in 0..p {
            m = m.max((estimate.get(i, j) - truth.get(i, j)).abs());
        }
    }
    Ok(m)
}

/// Median of a slice (interpolated between the two middle order statistics
/// for even lengths).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("median of non-finite values"));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Wall seconds per 1000 units of the median entrywise ESS.
pub fn seconds_per_kilo_ess(
    wall_seconds: f64,
    ess_entries: &[f64],
) -> Result<f64, DiagnosticsError> {
    let med = median(ess_entries).ok_or(DiagnosticsError::EmptyEss)?;
    Ok(wall_seconds / med * 1000.0)
}
