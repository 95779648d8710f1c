//! Small dense complex-matrix helpers shared by the dynamics and transform code.
//!
//! Matrices are stored row-major. The Hilbert spaces handled here stay small
//! (a few hundred states), so the dense kernels are plain loops; anything
//! performance-critical (Liouvillian solves) goes through sparse paths instead.

use faer::Side;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![ZERO; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_vec(n_rows: usize, n_cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n_rows * n_cols, "dense data length mismatch");
        Self {
            n_rows,
            n_cols,
            data,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert_eq!(self.n_rows, self.n_cols);
        (0..self.n_rows).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = CMat::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&mut self, s: Complex64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &CMat, s: Complex64) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |A_ij - conj(A_ji)| over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        debug_assert_eq!(self.n_rows, self.n_cols);
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            for j in i..self.n_cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Frobenius-inner-product trace of a product, tr(A B), without forming it.
    pub fn trace_of_product(&self, other: &CMat) -> Complex64 {
        debug_assert_eq!(self.n_cols, other.n_rows);
        debug_assert_eq!(self.n_rows, other.n_cols);
        let mut acc = ZERO;
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n_cols, other.n_rows, "dense matmul shape mismatch");
        let mut out = CMat::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let row_out = i * out.n_cols;
                let row_b = k * other.n_cols;
                for j in 0..other.n_cols {
                    out.data[row_out + j] += a * other.data[row_b + j];
                }
            }
        }
        out
    }

    pub fn to_faer(&self) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.n_rows, self.n_cols, |i, j| self.get(i, j))
    }

    pub fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMat {
        let mut out = CMat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    m.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::SolverFailure(format!("self-adjoint eigenvalues: {e:?}")))
}

/// Full eigendecomposition of a Hermitian matrix: (eigenvalues ascending, eigenvector columns).
pub fn hermitian_eigendecomposition(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = m
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::SolverFailure(format!("self-adjoint eigen: {e:?}")))?;
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..m.n_rows()).map(|i| s[i].re).collect();
    let vecs = CMat::from_faer(evd.U());
    Ok((vals, vecs))
}
