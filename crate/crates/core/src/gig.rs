//! Generalized inverse Gaussian random variates.
//!
//! GIG(q, a, b) has density proportional to x^{q-1} exp(-(a x + b / x) / 2)
//! on (0, inf) with a > 0, b > 0 and any real order q. The samplers need it
//! in two very different regimes:
//!
//! * the column updates draw with q = 1 - n/2, i.e. orders down to -10^4;
//! * the local-shrinkage updates draw with q = beta_a - 1/2 (exactly 0 at
//!   the half-Cauchy default) and b = sigma_jk^2 / tau1^2, which spans many
//!   orders of magnitude as entries are shrunk toward zero.
//!
//! Negative orders are reduced through the reciprocal property
//! 1/X ~ GIG(-q, b, a), and the remaining two-parameter standard form
//! f(x) ~ x^{lam-1} exp(-omega (x + 1/x) / 2) is sampled by one of two
//! rejection schemes, both with uniformly bounded rejection constants:
//!
//! * `lam >= 1` or `omega > 1`: ratio-of-uniforms shifted by the mode, with
//!   the bounding rectangle found by safeguarded bisection on the exact
//!   stationarity condition (closed-form cubic roots lose all precision in
//!   the extreme regimes this crate must support). Observed acceptance is
//!   roughly 0.5-0.75 over the supported range.
//! * `0 <= lam < 1` and `omega <= 1`: a three-piece hat for T = ln X, whose
//!   density exp(lam t - omega cosh t) is dominated by an exponential tilt
//!   on |t| <= T0 = ln(2/omega) and by Gumbel-type tails beyond. The hat
//!   mass approaches the target mass as omega -> 0, and acceptance stays
//!   above ~0.35 on the whole branch; this covers omega down to the
//!   smallest positive doubles, where the density is close to log-uniform
//!   over hundreds of decades.
//!
//! Everything works on log densities shifted by the mode value, so no
//! intermediate quantity overflows for |q| <= 1e4 and a, b in [1e-300, 1e12].

use thiserror::Error;

use crate::dist::RngHandle;

#[derive(Debug, Error)]
pub enum GigError {
    #[error("GIG parameters must be finite with a > 0 and b > 0, got (q={q}, a={a}, b={b})")]
    InvalidParameters { q: f64, a: f64, b: f64 },
}

/// Validated parameters of a GIG(q, a, b) distribution.
///
/// The boundary cases a = 0 or b = 0 are rejected: those limits are gamma
/// and inverse-gamma distributions and callers should draw them directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GigParams {
    q: f64,
    a: f64,
    b: f64,
}

impl GigParams {
    pub fn new(q: f64, a: f64, b: f64) -> Result<Self, GigError> {
        if !q.is_finite() || !(a > 0.0) || !a.is_finite() || !(b > 0.0) || !b.is_finite() {
            return Err(GigError::InvalidParameters { q, a, b });
        }
        Ok(GigParams { q, a, b })
    }

    pub fn order(&self) -> f64 {
        self.q
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// One draw from GIG(q, a, b). Always strictly positive and finite.
pub fn sample_gig(params: &GigParams, rng: &mut RngHandle) -> f64 {
    let GigParams { q, a, b } = *params;
    if q < 0.0 {
        // 1/X ~ GIG(-q, b, a)
        1.0 / sample_standardized(-q, b, a, rng)
    } else {
        sample_standardized(q, a, b, rng)
    }
}

/// Reduce to the two-parameter form and dispatch. Requires lam >= 0.
fn sample_standardized(lam: f64, a: f64, b: f64, rng: &mut RngHandle) -> f64 {
    let omega = a.sqrt() * b.sqrt();
    let scale = b.sqrt() / a.sqrt();
    let y = if lam < 1.0 && omega <= 1.0 {
        sample_log_space(lam, omega, rng)
    } else {
        sample_rou_shift(lam, omega, rng)
    };
    let x = scale * y;
    debug_assert!(x > 0.0 && x.is_finite(), "GIG draw {x} out of range");
    x
}

/// Log of the standard-form kernel x^{lam-1} exp(-omega (x + 1/x) / 2).
#[inline]
fn log_kernel(lam: f64, omega: f64, x: f64) -> f64 {
    (lam - 1.0) * x.ln() - 0.5 * omega * (x + 1.0 / x)
}

/// Mode of the standard form, written to avoid cancellation on both sides
/// of lam = 1.
fn standard_mode(lam: f64, omega: f64) -> f64 {
    if lam >= 1.0 {
        ((lam - 1.0) + ((lam - 1.0) * (lam - 1.0) + omega * omega).sqrt()) / omega
    } else {
        omega / ((1.0 - lam) + ((1.0 - lam) * (1.0 - lam) + omega * omega).sqrt())
    }
}

/// Ratio-of-uniforms with shift by the mode, for lam >= 1 or omega > 1.
fn sample_rou_shift(lam: f64, omega: f64, rng: &mut RngHandle) -> f64 {
    let m = standard_mode(lam, omega);
    let lh_mode = log_kernel(lam, omega, m);
    // Stationarity of (x - m) sqrt(kernel): 2 + (x - m) d/dx log kernel = 0.
    // One root on each side of the mode; the function below is positive at
    // the mode (value 2) and tends to -inf at both ends of (0, inf).
    let station = move |x: f64| -> f64 {
        2.0 + (x - m) * ((lam - 1.0) / x - 0.5 * omega + 0.5 * omega / (x * x))
    };
    let right = bisect_root(station, m, true);
    let left = bisect_root(station, m, false);
    // Inflate slightly so rounding in the root cannot truncate the region.
    let u_plus = (right - m) * ((log_kernel(lam, omega, right) - lh_mode) * 0.5).exp() * (1.0 + 1e-9);
    let u_minus = (left - m) * ((log_kernel(lam, omega, left) - lh_mode) * 0.5).exp() * (1.0 + 1e-9);
    loop {
        let u = u_minus + rng.uniform() * (u_plus - u_minus);
        let v = rng.uniform();
        if v <= 0.0 {
            continue;
        }
        let x = u / v + m;
        if x <= 0.0 {
            continue;
        }
        if 2.0 * v.ln() <= log_kernel(lam, omega, x) - lh_mode {
            return x;
        }
    }
}

/// Locate the stationarity root to the right (or left) of the mode by
/// bracket growth plus bisection. Monotone sign change is guaranteed: the
/// function is 2 at the mode and -inf at 0+ and +inf.
fn bisect_root(f: impl Fn(f64) -> f64, mode: f64, go_right: bool) -> f64 {
    let mut inner = mode;
    let mut outer = if go_right { mode * 2.0 } else { mode * 0.5 };
    let mut guard = 0;
    while f(outer) > 0.0 {
        inner = outer;
        outer = if go_right { outer * 2.0 } else { outer * 0.5 };
        guard += 1;
        assert!(
            guard < 4200 && outer > 0.0 && outer.is_finite(),
            "GIG bounding bracket failed (mode {mode}, go_right {go_right})"
        );
    }
    for _ in 0..200 {
        let mid = 0.5 * (inner + outer);
        if mid == inner || mid == outer {
            break;
        }
        if f(mid) > 0.0 {
            inner = mid;
        } else {
            outer = mid;
        }
        if (outer - inner).abs() <= 1e-13 * (inner.abs() + outer.abs()) {
            break;
        }
    }
    0.5 * (inner + outer)
}

/// Three-piece rejection for T = ln X with density exp(lam t - omega cosh t),
/// valid for 0 <= lam < 1 and 0 < omega <= 1.
///
/// With T0 = ln(2/omega), omega cosh t = e^{|t|-T0} + e^{-|t|-T0} is computed
/// without overflow, and:
///   middle |t| <= T0: hat e^{lam t}, sampled by inversion;
///   tails |t| > T0:  hat e^{+-lam T0} e^{s} exp(-e^{s}) in s = |t| - T0,
///                    sampled exactly via e^s = 1 + Exp(1).
fn sample_log_space(lam: f64, omega: f64, rng: &mut RngHandle) -> f64 {
    debug_assert!((0.0..1.0).contains(&lam) && omega > 0.0 && omega <= 1.0);
    let t0 = (2.0 / omega).ln();
    let lam_t0 = lam * t0;
    // Piece masses. exp(lam_t0) <= 2/omega stays finite for any positive
    // double omega.
    let (mass_mid, lo_exp, span_exp) = if lam == 0.0 {
        (2.0 * t0, 0.0, 0.0)
    } else {
        let lo = (-lam_t0).exp_m1();
        let hi = lam_t0.exp_m1();
        ((hi - lo) / lam, lo, hi - lo)
    };
    let mass_right = lam_t0.exp() / std::f64::consts::E;
    let mass_left = (-lam_t0).exp() / std::f64::consts::E;
    let total = mass_mid + mass_right + mass_left;

    loop {
        let pick = rng.uniform() * total;
        let (t, log_hat) = if pick < mass_mid {
            let t = if lam == 0.0 {
                (2.0 * rng.uniform() - 1.0) * t0
            } else {
                (lo_exp + rng.uniform() * span_exp).ln_1p() / lam
            };
            (t, lam * t)
        } else if pick < mass_mid + mass_right {
            let s = (1.0 + rng.exponential()).ln();
            (t0 + s, lam_t0 + s - s.exp())
        } else {
            let s = (1.0 + rng.exponential()).ln();
            (-t0 - s, -lam_t0 + s - s.exp())
        };
        let log_target = lam * t - ((t.abs() - t0).exp() + (-t.abs() - t0).exp());
        if rng.uniform().max(f64::MIN_POSITIVE).ln() <= log_target - log_hat {
            return t.exp();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_parameters() {
        assert!(GigParams::new(0.5, 0.0, 1.0).is_err());
        assert!(GigParams::new(0.5, 1.0, -1.0).is_err());
        assert!(GigParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(GigParams::new(0.5, f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn inverse_gaussian_closed_form_mean() {
        // q = -1/2, a = 4, b = 9: E[X] = sqrt(b/a) = 1.5 by the Bessel
        // symmetry K_{1/2} = K_{-1/2}.
        let params = GigParams::new(-0.5, 4.0, 9.0).unwrap();
        let mut rng = RngHandle::new(2024);
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_gig(&params, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn draws_positive_and_finite_across_regimes() {
        let mut rng = RngHandle::new(5);
        let cases = [
            (0.0, 1.0, 1e-8),
            (0.0, 1.0, 1.0),
            (0.0, 1.0, 100.0),
            (-200.0, 0.1, 50.0),
            (1.0 - 125.0, 1.0, 3.7),
            (-1e4, 1e-12, 1e12),
            (1e4, 1e12, 1e-12),
            (0.5, 1e-12, 1e-12),
            (0.0, 2.0, 1e-300),
            (0.37, 1e12, 1e12),
        ];
        for &(q, a, b) in &cases {
            let params = GigParams::new(q, a, b).unwrap();
            for _ in 0..2000 {
                let x = sample_gig(&params, &mut rng);
                assert!(x > 0.0 && x.is_finite(), "draw {x} for ({q}, {a}, {b})");
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let params = GigParams::new(-60.0, 1.0, 4.2).unwrap();
        let mut a = RngHandle::new(31);
        let mut b = RngHandle::new(31);
        for _ in 0..50 {
            assert_eq!(
                sample_gig(&params, &mut a).to_bits(),
                sample_gig(&params, &mut b).to_bits()
            );
        }
    }
}
