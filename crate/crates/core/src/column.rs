//! The blocked column update shared by both samplers.
//!
//! For one column j, partition Sigma, the scatter S = X'X, and the matrix of
//! prior variances at j, and change variables to (u, v) with u the
//! off-diagonal block and v = sigma_22 - sigma_12' Sigma_11^{-1} sigma_12
//! the Schur complement. The conditionals are then
//!
//!   u | rest ~ N((B + D^{-1})^{-1} w, (B + D^{-1})^{-1}),
//!       B = Sigma_11^{-1} S_11 Sigma_11^{-1} / v + lambda Sigma_11^{-1},
//!       w = Sigma_11^{-1} s_12 / v,
//!       D = diag of the prior variances of the entries of u;
//!   v | rest ~ GIG(1 - n/2, lambda,
//!       u' Sigma_11^{-1} S_11 Sigma_11^{-1} u - 2 s_12' Sigma_11^{-1} u + s_22).
//!
//! Drawing v from the GIG keeps it strictly positive, so writing back
//! sigma_22 = v + u' Sigma_11^{-1} u preserves positive definiteness of the
//! whole matrix whenever Sigma_11 is positive definite.

use crate::chain::SamplerError;
use crate::dist::{sample_mvn_from_precision_factor, RngHandle};
use crate::gig::{sample_gig, GigParams};
use crate::matrix::{ColumnPartition, SymmetricMatrix};

/// Floor applied to the GIG chi argument when floating error drives the
/// three-term expression nonpositive.
pub const CHI_CLAMP: f64 = 1e-12;

/// Gaussian full conditional of the off-diagonal block u at column `j`:
/// the precision matrix B + D^{-1} and linear term w.
#[derive(Debug, Clone)]
pub struct ColumnConditional {
    pub precision: SymmetricMatrix,
    pub linear_term: Vec<f64>,
}

/// Assemble the u-conditional from the current state. `prior_variances`
/// holds the p-1 prior variances of the entries of u in partition order
/// (all indices except j, ascending).
pub fn column_conditional(
    sigma: &SymmetricMatrix,
    scatter: &SymmetricMatrix,
    j: usize,
    prior_variances: &[f64],
    lambda: f64,
) -> Result<ColumnConditional, SamplerError> {
    let part = sigma.partition(j)?;
    let spart = scatter.partition(j)?;
    let quantities = ColumnQuantities::prepare(&part, &spart)?;
    Ok(quantities.conditional(prior_variances, lambda))
}

/// Precomputed per-column quantities reused by the draw of u, the GIG chi
/// term, and the write-back of sigma_22.
pub(crate) struct ColumnQuantities {
    /// Sigma_11^{-1}.
    inv11: SymmetricMatrix,
    /// Sigma_11^{-1} S_11 Sigma_11^{-1}.
    quad: SymmetricMatrix,
    /// Sigma_11^{-1} s_12.
    inv_s12: Vec<f64>,
    /// Current Schur complement v = sigma_22 - sigma_12' Sigma_11^{-1} sigma_12.
    v: f64,
}

impl ColumnQuantities {
    pub(crate) fn prepare(
        part: &ColumnPartition,
        scatter_part: &ColumnPartition,
    ) -> Result<Self, SamplerError> {
        let m = part.sigma11.dim();
        let chol = part.sigma11.cholesky()?;
        let inv11 = chol.inverse();
        let v = part.sigma22 - part.sigma11_quadratic(&inv11);
        if !(v > 0.0) || !v.is_finite() {
            // The Schur complement of a PD matrix is positive; anything else
            // means the state left the cone.
            return Err(SamplerError::Matrix(
                crate::matrix::MatrixError::NotPositiveDefinite {
                    column: part.index,
                    pivot: v,
                },
            ));
        }
        // T = Sigma_11^{-1} S_11, then quad = T Sigma_11^{-1}. The product
        // is symmetric, so only its upper triangle is accumulated.
        let t = mat_mul(inv11.as_slice(), scatter_part.sigma11.as_slice(), m);
        let quad = mat_mul_symmetric(&t, &inv11, m);
        let inv_s12 = inv11.mul_vec(&scatter_part.sigma12);
        Ok(ColumnQuantities {
            inv11,
            quad,
            inv_s12,
            v,
        })
    }

    pub(crate) fn conditional(
        &self,
        prior_variances: &[f64],
        lambda: f64,
    ) -> ColumnConditional {
        let m = self.inv11.dim();
        debug_assert_eq!(prior_variances.len(), m);
        let precision = SymmetricMatrix::from_fn(m, |i, j| {
            let mut x = self.quad.get(i, j) / self.v + lambda * self.inv11.get(i, j);
            if i == j {
                x += 1.0 / prior_variances[i];
            }
            x
        });
        let linear_term: Vec<f64> = self.inv_s12.iter().map(|x| x / self.v).collect();
        ColumnConditional {
            precision,
            linear_term,
        }
    }
}

impl ColumnPartition {
    /// sigma_12' A sigma_12 for this partition's off-diagonal block.
    fn sigma11_quadratic(&self, a: &SymmetricMatrix) -> f64 {
        a.quadratic_form(&self.sigma12)
    }
}

fn mat_mul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; m * m];
    for i in 0..m {
        let arow = &a[i * m..(i + 1) * m];
        let orow = &mut out[i * m..(i + 1) * m];
        for (k, &aik) in arow.iter().enumerate() {
            let brow = &b[k * m..(k + 1) * m];
            for (o, &bv) in orow.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    }
    out
}

/// Upper triangle of T B for a product known to be symmetric (B symmetric,
/// T = B' for some symmetric factorization), mirrored into a
/// `SymmetricMatrix`. Row i of the result is T[i] . columns of B, taken as
/// rows by symmetry of B.
fn mat_mul_symmetric(t: &[f64], b: &SymmetricMatrix, m: usize) -> SymmetricMatrix {
    let bs = b.as_slice();
    let mut out = SymmetricMatrix::zeros(m);
    for i in 0..m {
        let trow = &t[i * m..(i + 1) * m];
        for j in i..m {
            let brow = &bs[j * m..(j + 1) * m];
            let mut s = 0.0;
            for (x, y) in trow.iter().zip(brow) {
                s += x * y;
            }
            out.set(i, j, s);
        }
    }
    out
}

/// Outcome of one column update.
#[derive(Debug, Clone, Copy)]
pub struct ColumnDraw {
    /// New Schur complement.
    pub v: f64,
    /// Whether the chi term was clamped to the floor.
    pub chi_clamped: bool,
}

/// Draw (u, v) for column `j` and write the new column and diagonal entry
/// back into `sigma`.
pub(crate) fn update_column_with_priors(
    sigma: &mut SymmetricMatrix,
    scatter_part: &ColumnPartition,
    n: usize,
    j: usize,
    prior_variances: &[f64],
    lambda: f64,
    rng: &mut RngHandle,
) -> Result<ColumnDraw, SamplerError> {
    let part = sigma.partition(j)?;
    let q = ColumnQuantities::prepare(&part, scatter_part)?;
    let cond = q.conditional(prior_variances, lambda);
    let chol_precision = cond.precision.cholesky()?;
    let u = sample_mvn_from_precision_factor(&chol_precision, &cond.linear_term, rng)?;

    // chi = u' Sigma_11^{-1} S_11 Sigma_11^{-1} u - 2 s_12' Sigma_11^{-1} u + s_22
    let y = q.inv11.mul_vec(&u);
    let mut chi = scatter_part.sigma11.quadratic_form(&y)
        - 2.0 * dot(&scatter_part.sigma12, &y)
        + scatter_part.sigma22;
    let chi_clamped = chi <= 0.0;
    if chi_clamped {
        chi = CHI_CLAMP;
    }
    let v = sample_gig(
        &GigParams::new(1.0 - n as f64 / 2.0, lambda, chi)?,
        rng,
    );

    let sigma22 = v + dot(&u, &y);
    let p = sigma.dim();
    for a in 0..(p - 1) {
        let ia = if a < j { a } else { a + 1 };
        sigma.set(ia, j, u[a]);
    }
    sigma.set(j, j, sigma22);
    Ok(ColumnDraw { v, chi_clamped })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
