//! Dense symmetric matrices and the small amount of linear algebra the
//! samplers need: Cholesky factorization, SPD solves, extreme eigenvalues,
//! and the column partition / reassembly used by every Gibbs sweep.
//!
//! Matrices are stored dense. The sparsity targeted by the estimators lives
//! in the estimand, not in anything exploitable by the conditional updates,
//! which couple all entries of a column.

use thiserror::Error;

/// Errors from matrix construction and factorization.
#[derive(Debug, Error)]
pub enum MatrixError {
    /// A Cholesky pivot was non-positive: the matrix is not positive
    /// definite. This is never repaired silently; inside a Gibbs chain it
    /// indicates a bug or numerically degenerate input.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at column {column})")]
    NotPositiveDefinite { column: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("column index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("operation requires dimension >= {required}, got {got}")]
    DimensionTooSmall { required: usize, got: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("rows have unequal lengths or are inconsistent with a square matrix")]
    RaggedInput,

    #[error("entries are not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("eigenvalue iteration did not converge within {cap} iterations")]
    EigenNoConvergence { cap: usize },
}

/// Dense symmetric p x p matrix with `f64` entries.
///
/// The two mirror entries of every off-diagonal pair are written from a
/// single value, so symmetry holds bitwise by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Zero matrix of dimension `dim` (dim >= 1).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            m.data[j * dim + j] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (j, &d) in diag.iter().enumerate() {
            m.data[j * m.dim + j] = d;
        }
        m
    }

    /// Build from full row data. Fails on ragged input, non-finite entries,
    /// or asymmetry (entries must match bitwise).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::RaggedInput);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MatrixError::RaggedInput);
            }
            data.extend_from_slice(row);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j].to_bits() != data[j * dim + i].to_bits() {
                    return Err(MatrixError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricMatrix { dim, data })
    }

    /// Build the symmetric matrix with entries `f(i, j)`; only `i <= j` is
    /// evaluated and mirrored.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Set entry (i, j) and its mirror (j, i) from one value.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|j| self.get(j, j)).sum()
    }

    /// A + c I, in place.
    pub fn add_scaled_identity(&mut self, c: f64) {
        for j in 0..self.dim {
            self.data[j * self.dim + j] += c;
        }
    }

    /// Quadratic form x' A x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut total = 0.0;
        for i in 0..self.dim {
            let row = self.row(i);
            let mut s = 0.0;
            for j in 0..self.dim {
                s += row[j] * x[j];
            }
            total += x[i] * s;
        }
        total
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let row = self.row(i);
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Lower Cholesky factor L with L L' = A, or `NotPositiveDefinite`.
    pub fn cholesky(&self) -> Result<CholeskyFactor, MatrixError> {
        let n = self.dim;
        let mut lower = vec![0.0f64; n * n];
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                let l = lower[j * n + k];
                d -= l * l;
            }
            if !(d > 0.0) {
                return Err(MatrixError::NotPositiveDefinite { column: j, pivot: d });
            }
            let d = d.sqrt();
            lower[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= lower[i * n + k] * lower[j * n + k];
                }
                lower[i * n + j] = s / d;
            }
        }
        Ok(CholeskyFactor { dim: n, lower })
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_ok()
    }

    /// Solve A x = rhs for symmetric positive definite A.
    ///
    /// The residual satisfies ||A x - rhs||_inf <= 1e-8 ||rhs||_inf for
    /// reasonably conditioned systems; `NotPositiveDefinite` propagates.
    pub fn solve_spd(&self, rhs: &[f64]) -> Result<Vec<f64>, MatrixError> {
        if rhs.len() != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                got: rhs.len(),
            });
        }
        Ok(self.cholesky()?.solve(rhs))
    }

    /// Extract the partition of `self` at column `j` (0-based): the matrix
    /// with row/column j deleted, column j without its diagonal entry, and
    /// the diagonal entry itself.
    ///
    /// The rotation of column j to the last position is realized as an index
    /// map while copying blocks out, never as a physical permutation of the
    /// full matrix.
    pub fn partition(&self, j: usize) -> Result<ColumnPartition, MatrixError> {
        if self.dim < 2 {
            return Err(MatrixError::DimensionTooSmall {
                required: 2,
                got: self.dim,
            });
        }
        if j >= self.dim {
            return Err(MatrixError::IndexOutOfRange {
                index: j,
                dim: self.dim,
            });
        }
        let p = self.dim;
        let m = p - 1;
        let mut sigma11 = SymmetricMatrix::zeros(m);
        let mut sigma12 = vec![0.0f64; m];
        for a in 0..m {
            let ia = if a < j { a } else { a + 1 };
            sigma12[a] = self.get(ia, j);
            let src = &self.data[ia * p..(ia + 1) * p];
            let dst = &mut sigma11.data[a * m..(a + 1) * m];
            dst[..j].copy_from_slice(&src[..j]);
            dst[j..].copy_from_slice(&src[j + 1..]);
        }
        Ok(ColumnPartition {
            sigma11,
            sigma12,
            sigma22: self.get(j, j),
            index: j,
        })
    }

    /// Extreme eigenvalues (lambda_min, lambda_max) via Householder
    /// tridiagonalization and implicit-shift QL iteration.
    pub fn extreme_eigenvalues(&self) -> Result<(f64, f64), MatrixError> {
        let eig = self.eigenvalues()?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &e in &eig {
            lo = lo.min(e);
            hi = hi.max(e);
        }
        Ok((lo, hi))
    }

    /// All eigenvalues, unordered.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, MatrixError> {
        let (mut d, mut e) = self.tridiagonalize();
        tridiagonal_eigenvalues(&mut d, &mut e)?;
        Ok(d)
    }

    /// Householder reduction to tridiagonal form; returns the diagonal and
    /// the subdiagonal (e[0] unused).
    fn tridiagonalize(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut d = vec![0.0f64; n];
        let mut e = vec![0.0f64; n];
        if n == 1 {
            d[0] = a[0];
            return (d, e);
        }
        for i in (1..n).rev() {
            let l = i;
            let mut h = 0.0f64;
            if l > 1 {
                let mut scale = 0.0f64;
                for k in 0..l {
                    scale += a[i * n + k].abs();
                }
                if scale == 0.0 {
                    e[i] = a[i * n + (l - 1)];
                } else {
                    for k in 0..l {
                        a[i * n + k] /= scale;
                        h += a[i * n + k] * a[i * n + k];
                    }
                    let mut f = a[i * n + (l - 1)];
                    let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                    e[i] = scale * g;
                    h -= f * g;
                    a[i * n + (l - 1)] = f - g;
                    f = 0.0;
                    for jj in 0..l {
                        let mut g = 0.0f64;
                        for k in 0..=jj {
                            g += a[jj * n + k] * a[i * n + k];
                        }
                        for k in (jj + 1)..l {
                            g += a[k * n + jj] * a[i * n + k];
                        }
                        e[jj] = g / h;
                        f += e[jj] * a[i * n + jj];
                    }
                    let hh = f / (h + h);
                    for jj in 0..l {
                        let fj = a[i * n + jj];
                        let gj = e[jj] - hh * fj;
                        e[jj] = gj;
                        for k in 0..=jj {
                            a[jj * n + k] -= fj * e[k] + gj * a[i * n + k];
                        }
                    }
                }
            } else {
                e[i] = a[i * n + (l - 1)];
            }
            d[i] = h;
        }
        for i in 0..n {
            d[i] = a[i * n + i];
        }
        (d, e)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
/// method. `d` holds the diagonal on entry and the eigenvalues on exit;
/// `e` is the subdiagonal in positions 1..n.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<(), MatrixError> {
    let n = d.len();
    const MAX_SWEEPS: usize = 50;
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(MatrixError::EigenNoConvergence { cap: MAX_SWEEPS });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
    Ok(())
}

/// Lower-triangular Cholesky factor of a positive definite matrix.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>,
}

impl CholeskyFactor {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.lower[i * self.dim + j]
        } else {
            0.0
        }
    }

    /// log det A = 2 sum log L_jj.
    pub fn log_det(&self) -> f64 {
        (0..self.dim)
            .map(|j| self.lower[j * self.dim + j].ln())
            .sum::<f64>()
            * 2.0
    }

    /// Solve L y = b in place.
    pub fn forward_solve(&self, b: &mut [f64]) {
        let n = self.dim;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lower[i * n + k] * b[k];
            }
            b[i] = s / self.lower[i * n + i];
        }
    }

    /// Solve L' x = y in place.
    pub fn back_solve(&self, y: &mut [f64]) {
        let n = self.dim;
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.lower[k * n + i] * y[k];
            }
            y[i] = s / self.lower[i * n + i];
        }
    }

    /// Solve A x = rhs.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.forward_solve(&mut x);
        self.back_solve(&mut x);
        x
    }

    /// A^{-1}, as a symmetric matrix: W = L^{-1} by forward substitution
    /// (stored transposed so each column of W is contiguous), then
    /// A^{-1} = W' W accumulated over the upper triangle and mirrored.
    pub fn inverse(&self) -> SymmetricMatrix {
        let n = self.dim;
        // wt[j * n + i] = W[i][j] = (L^{-1})[i][j], nonzero for i >= j.
        let mut wt = vec![0.0f64; n * n];
        for j in 0..n {
            let col = &mut wt[j * n..(j + 1) * n];
            col[j] = 1.0 / self.lower[j * n + j];
            for i in (j + 1)..n {
                let row = &self.lower[i * n..i * n + i];
                let mut s = 0.0;
                for k in j..i {
                    s += row[k] * col[k];
                }
                col[i] = -s / self.lower[i * n + i];
            }
        }
        let mut inv = SymmetricMatrix::zeros(n);
        for i in 0..n {
            let ci = &wt[i * n..(i + 1) * n];
            for j in i..n {
                let cj = &wt[j * n..(j + 1) * n];
                let mut s = 0.0;
                for k in j..n {
                    s += ci[k] * cj[k];
                }
                inv.set(i, j, s);
            }
        }
        inv
    }

    /// Reconstruct L L'.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.dim;
        SymmetricMatrix::from_fn(n, |i, j| {
            let mut s = 0.0;
            for k in 0..=i.min(j) {
                s += self.lower[i * n + k] * self.lower[j * n + k];
            }
            s
        })
    }
}

/// The block partition of a symmetric matrix at one column: the matrix with
/// that row/column deleted, the off-diagonal part of the column, and the
/// diagonal entry, together with the column index that was rotated out.
#[derive(Debug, Clone)]
pub struct ColumnPartition {
    pub sigma11: SymmetricMatrix,
    pub sigma12: Vec<f64>,
    pub sigma22: f64,
    /// 0-based column that was moved to the last position.
    pub index: usize,
}

impl ColumnPartition {
    /// Rebuild the unique symmetric matrix whose partition at `index`
    /// equals `self`. Exact: entries are moved, never recomputed.
    pub fn reassemble(&self) -> SymmetricMatrix {
        let m = self.sigma11.dim();
        let p = m + 1;
        let j = self.index;
        assert!(j < p, "partition index out of range");
        assert_eq!(self.sigma12.len(), m, "partition blocks are inconsistent");
        let mut out = SymmetricMatrix::zeros(p);
        for a in 0..m {
            let ia = if a < j { a } else { a + 1 };
            for b in a..m {
                let ib = if b < j { b } else { b + 1 };
                out.set(ia, ib, self.sigma11.get(a, b));
            }
            out.set(ia, j, self.sigma12[a]);
        }
        out.set(j, j, self.sigma22);
        out
    }
}

/// Dense row-major n x p data matrix (observations by variables).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DataMatrix {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != n_rows * n_cols {
            return Err(MatrixError::RaggedInput);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(DataMatrix {
            n_rows,
            n_cols,
            data,
        })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        DataMatrix {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// X' X, the scatter matrix of the zero-mean model.
    pub fn scatter(&self) -> SymmetricMatrix {
        let p = self.n_cols;
        SymmetricMatrix::from_fn(p, |a, b| {
            let mut s = 0.0;
            for i in 0..self.n_rows {
                let row = self.row(i);
                s += row[a] * row[b];
            }
            s
        })
    }

    /// Column mean.
    pub fn column_mean(&self, j: usize) -> f64 {
        (0..self.n_rows).map(|i| self.get(i, j)).sum::<f64>() / self.n_rows as f64
    }

    /// Column variance about the mean with denominator n.
    pub fn column_variance(&self, j: usize) -> f64 {
        let mean = self.column_mean(j);
        (0..self.n_rows)
            .map(|i| {
                let d = self.get(i, j) - mean;
                d * d
            })
            .sum::<f64>()
            / self.n_rows as f64
    }

    /// Keep the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> DataMatrix {
        let mut out = DataMatrix::zeros(self.n_rows, cols.len());
        for i in 0..self.n_rows {
            for (new_j, &j) in cols.iter().enumerate() {
                out.set(i, new_j, self.get(i, j));
            }
        }
        out
    }

    /// Keep the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> DataMatrix {
        let mut out = DataMatrix::zeros(rows.len(), self.n_cols);
        for (new_i, &i) in rows.iter().enumerate() {
            out.row_mut(new_i).copy_from_slice(self.row(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn cholesky_identity_is_identity() {
        let m = SymmetricMatrix::identity(4);
        let l = m.cholesky().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                approx(l.get(i, j), if i == j { 1.0 } else { 0.0 }, 0.0);
            }
        }
    }

    #[test]
    fn cholesky_hand_elimination_2x2() {
        // [[4,2],[2,3]] -> L = [[2,0],[1,sqrt(2)]]
        let m = SymmetricMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = m.cholesky().unwrap();
        approx(l.get(0, 0), 2.0, 1e-15);
        approx(l.get(1, 0), 1.0, 1e-15);
        approx(l.get(1, 1), 2.0f64.sqrt(), 1e-15);
        let rec = l.reconstruct();
        for i in 0..2 {
            for j in 0..2 {
                approx(rec.get(i, j), m.get(i, j), 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        match m.cholesky() {
            Err(MatrixError::NotPositiveDefinite { .. }) => {}
            other => panic!("expected NotPositiveDefinite, got {other:?}"),
        }
    }

    #[test]
    fn solve_spd_identity_and_diagonal() {
        let m = SymmetricMatrix::identity(3);
        let x = m.solve_spd(&[1.0, -2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, -2.0, 3.0]);

        let d = SymmetricMatrix::from_diagonal(&[2.0, 4.0]);
        let x = d.solve_spd(&[2.0, 8.0]).unwrap();
        approx(x[0], 1.0, 1e-15);
        approx(x[1], 2.0, 1e-15);
    }

    #[test]
    fn solve_spd_dimension_mismatch() {
        let m = SymmetricMatrix::identity(3);
        assert!(matches!(
            m.solve_spd(&[1.0, 2.0]),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partition_2x2_identity() {
        let m = SymmetricMatrix::identity(2);
        let part = m.partition(1).unwrap();
        assert_eq!(part.sigma11.dim(), 1);
        approx(part.sigma11.get(0, 0), 1.0, 0.0);
        assert_eq!(part.sigma12, vec![0.0]);
        approx(part.sigma22, 1.0, 0.0);
    }

    #[test]
    fn partition_rejects_bad_index_and_small_dim() {
        let m = SymmetricMatrix::identity(3);
        assert!(matches!(
            m.partition(3),
            Err(MatrixError::IndexOutOfRange { .. })
        ));
        let one = SymmetricMatrix::identity(1);
        assert!(matches!(
            one.partition(0),
            Err(MatrixError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn reassemble_identity_case() {
        let part = ColumnPartition {
            sigma11: SymmetricMatrix::identity(1),
            sigma12: vec![0.0],
            sigma22: 1.0,
            index: 1,
        };
        let m = part.reassemble();
        assert_eq!(m, SymmetricMatrix::identity(2));
    }

    #[test]
    fn extreme_eigenvalues_closed_forms() {
        let m = SymmetricMatrix::identity(5);
        let (lo, hi) = m.extreme_eigenvalues().unwrap();
        approx(lo, 1.0, 1e-12);
        approx(hi, 1.0, 1e-12);

        let d = SymmetricMatrix::from_diagonal(&[0.5, 3.0]);
        let (lo, hi) = d.extreme_eigenvalues().unwrap();
        approx(lo, 0.5, 1e-12);
        approx(hi, 3.0, 1e-12);

        // [[2,1],[1,2]] -> eigenvalues 1 and 3
        let m = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (lo, hi) = m.extreme_eigenvalues().unwrap();
        approx(lo, 1.0, 1e-10);
        approx(hi, 3.0, 1e-10);
    }

    #[test]
    fn eigenvalues_match_diagonal() {
        let d = SymmetricMatrix::from_diagonal(&[4.0, -1.0, 2.5, 0.25]);
        let (lo, hi) = d.extreme_eigenvalues().unwrap();
        approx(lo, -1.0, 1e-12);
        approx(hi, 4.0, 1e-12);
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let r = SymmetricMatrix::from_rows(&[vec![1.0, 0.1], vec![0.2, 1.0]]);
        assert!(matches!(r, Err(MatrixError::NotSymmetric { .. })));
    }

    #[test]
    fn scatter_matches_hand_computation() {
        let x = DataMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = x.scatter();
        approx(s.get(0, 0), 10.0, 0.0);
        approx(s.get(0, 1), 14.0, 0.0);
        approx(s.get(1, 1), 20.0, 0.0);
    }
}
