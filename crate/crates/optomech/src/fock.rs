//! Truncated Fock-space operator algebra on composite bosonic Hilbert spaces.
//!
//! # Mode ordering
//!
//! A [`ModeSpace`] is an ordered list of per-mode truncation dimensions. Slot 0
//! is the leftmost label of a ket: the basis state `|n_0, n_1, ..., n_{M-1}>`
//! has the flat index
//!
//! ```text
//! idx = ((n_0 * d_1 + n_1) * d_2 + n_2) * ... + n_{M-1}
//! ```
//!
//! i.e. slot 0 is the most significant factor of the Kronecker product. Every
//! module in this crate references this ordering; none re-derives its own.
//! The concrete slot assignments used by the model builders are documented in
//! [`crate::model`].
//!
//! Operators are sparse (CSR with sorted column indices), immutable after
//! construction, and iterate their entries in a fixed (row, column) order so
//! repeated runs produce bit-identical results.

use num_complex::Complex64;

use crate::dense::{CMat, ONE, ZERO};
use crate::error::{Error, Result};

/// Ordered list of per-mode truncation dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSpace {
    dims: Vec<usize>,
}

impl ModeSpace {
    /// Every dimension must be at least 2 and the product must fit in `usize`.
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::WrongModeCount {
                expected: 1,
                got: 0,
            });
        }
        let mut total: usize = 1;
        for &d in &dims {
            if d < 2 {
                return Err(Error::InvalidDimension { dim: d });
            }
            total = total.checked_mul(d).ok_or(Error::DimensionOverflow)?;
        }
        // the vectorized Liouvillian needs total^2 indices
        total.checked_mul(total).ok_or(Error::DimensionOverflow)?;
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_modes(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension (product of mode dimensions).
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Flat index of the basis ket with the given occupations.
    pub fn index_of(&self, occupations: &[usize]) -> usize {
        assert_eq!(occupations.len(), self.dims.len(), "occupation arity");
        let mut idx = 0;
        for (&n, &d) in occupations.iter().zip(&self.dims) {
            assert!(n < d, "occupation {n} exceeds mode dimension {d}");
            idx = idx * d + n;
        }
        idx
    }

    /// Occupations of the basis ket with the given flat index.
    pub fn occupations_of(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.dims.len()];
        for (slot, &d) in self.dims.iter().enumerate().rev() {
            occ[slot] = index % d;
            index /= d;
        }
        occ
    }

    /// Space with every mode dimension raised by `delta` (used by scan
    /// convergence checks).
    pub fn bumped(&self, delta: usize) -> Result<ModeSpace> {
        ModeSpace::new(self.dims.iter().map(|d| d + delta).collect::<Vec<_>>())
    }
}

/// Sparse operator on a [`ModeSpace`], CSR with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    space: ModeSpace,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<Complex64>,
}

impl QOperator {
    pub fn zero(space: &ModeSpace) -> Self {
        Self {
            space: space.clone(),
            row_ptr: vec![0; space.dim() + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(space: &ModeSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![ONE; n],
        }
    }

    /// Build from (row, col, value) triplets; duplicates are summed, exact
    /// zeros dropped.
    pub fn from_triplets(
        space: &ModeSpace,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Result<Self> {
        let n = space.dim();
        for &(r, c, _) in &triplets {
            if r >= n || c >= n {
                return Err(Error::InvalidParameter {
                    what: "operator entry index",
                    constraint: "below the total space dimension",
                    value: r.max(c) as f64,
                });
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            col_idx.push(c);
            vals.push(v);
            row_ptr[r + 1] = col_idx.len();
            last = Some((r, c));
        }
        // forward-fill row pointers and drop exact zeros
        for r in 0..n {
            if row_ptr[r + 1] < row_ptr[r] {
                row_ptr[r + 1] = row_ptr[r];
            }
        }
        let mut out = Self {
            space: space.clone(),
            row_ptr,
            col_idx,
            vals,
        };
        out.drop_zeros();
        Ok(out)
    }

    fn drop_zeros(&mut self) {
        if self.vals.iter().all(|v| *v != ZERO) {
            return;
        }
        let n = self.space.dim();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(self.col_idx.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.vals[k] != ZERO {
                    col_idx.push(self.col_idx[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        self.row_ptr = row_ptr;
        self.col_idx = col_idx;
        self.vals = vals;
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Entries in deterministic (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.space.dim()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.vals[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        match self.col_idx[lo..hi].binary_search(&col) {
            Ok(k) => self.vals[lo + k],
            Err(_) => ZERO,
        }
    }

    fn check_space(&self, other: &QOperator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.dims().to_vec(),
                right: other.space.dims().to_vec(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QOperator) -> Result<QOperator> {
        self.check_space(other)?;
        let n = self.space.dim();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..n {
            let (mut i, ie) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let (mut j, je) = (other.row_ptr[r], other.row_ptr[r + 1]);
            while i < ie || j < je {
                let (c, v) = if j >= je || (i < ie && self.col_idx[i] < other.col_idx[j]) {
                    let out = (self.col_idx[i], self.vals[i]);
                    i += 1;
                    out
                } else if i >= ie || other.col_idx[j] < self.col_idx[i] {
                    let out = (other.col_idx[j], other.vals[j]);
                    j += 1;
                    out
                } else {
                    let out = (self.col_idx[i], self.vals[i] + other.vals[j]);
                    i += 1;
                    j += 1;
                    out
                };
                if v != ZERO {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        Ok(QOperator {
            space: self.space.clone(),
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn scaled(&self, s: Complex64) -> QOperator {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out.drop_zeros();
        out
    }

    pub fn try_mul(&self, other: &QOperator) -> Result<QOperator> {
        self.check_space(other)?;
        let n = self.space.dim();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        // dense scratch row keeps accumulation order deterministic
        let mut acc = vec![ZERO; n];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.vals[k];
                let mid = self.col_idx[k];
                for m in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.col_idx[m];
                    if acc[c] == ZERO {
                        touched.push(c);
                    }
                    acc[c] += a * other.vals[m];
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    col_idx.push(c);
                    vals.push(acc[c]);
                }
                acc[c] = ZERO;
            }
            touched.clear();
            row_ptr[r + 1] = col_idx.len();
        }
        Ok(QOperator {
            space: self.space.clone(),
            row_ptr,
            col_idx,
            vals,
        })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> QOperator {
        let triplets = self
            .entries()
            .map(|(r, c, v)| (c, r, v.conj()))
            .collect::<Vec<_>>();
        QOperator::from_triplets(&self.space, triplets).expect("dagger preserves bounds")
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Largest |A_ij - conj(A_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.dagger();
        let diff = self.try_add(&adj.scaled(-ONE)).expect("same space");
        diff.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Gershgorin bound on the spectral radius (max row sum of moduli).
    pub fn gershgorin_bound(&self) -> f64 {
        let n = self.space.dim();
        (0..n)
            .map(|r| {
                self.vals[self.row_ptr[r]..self.row_ptr[r + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> CMat {
        let n = self.space.dim();
        let mut m = CMat::zeros(n, n);
        for (r, c, v) in self.entries() {
            m.set(r, c, v);
        }
        m
    }

    /// `self * rhs` with a dense right factor.
    pub fn mul_dense(&self, rhs: &CMat) -> CMat {
        let n = self.space.dim();
        assert_eq!(rhs.n_rows(), n, "sparse*dense shape mismatch");
        let cols = rhs.n_cols();
        let mut out = CMat::zeros(n, cols);
        for r in 0..n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.vals[k];
                let mid = self.col_idx[k];
                let src = mid * cols;
                let dst = r * cols;
                let (od, rd) = (out.data_mut(), rhs.data());
                for j in 0..cols {
                    od[dst + j] += a * rd[src + j];
                }
            }
        }
        out
    }

    /// `lhs * self` with a dense left factor.
    pub fn mul_dense_left(&self, lhs: &CMat) -> CMat {
        let n = self.space.dim();
        assert_eq!(lhs.n_cols(), n, "dense*sparse shape mismatch");
        let rows = lhs.n_rows();
        let mut out = CMat::zeros(rows, n);
        for mid in 0..n {
            for k in self.row_ptr[mid]..self.row_ptr[mid + 1] {
                let a = self.vals[k];
                let c = self.col_idx[k];
                for i in 0..rows {
                    let v = lhs.get(i, mid) * a;
                    let cur = out.get(i, c);
                    out.set(i, c, cur + v);
                }
            }
        }
        out
    }

    /// Apply to a state vector.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.space.dim();
        assert_eq!(psi.len(), n, "state length mismatch");
        let mut out = vec![ZERO; n];
        for r in 0..n {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * psi[self.col_idx[k]];
            }
            out[r] = acc;
        }
        out
    }

    /// Dense operator reinterpreted as sparse (keeps every nonzero entry).
    pub fn from_dense(space: &ModeSpace, m: &CMat) -> Result<QOperator> {
        let n = space.dim();
        assert_eq!(m.n_rows(), n);
        assert_eq!(m.n_cols(), n);
        let mut triplets = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let v = m.get(r, c);
                if v != ZERO {
                    triplets.push((r, c, v));
                }
            }
        }
        QOperator::from_triplets(space, triplets)
    }
}

impl std::ops::Add for &QOperator {
    type Output = QOperator;
    /// Panics on mode-space mismatch; use [`QOperator::try_add`] to handle it.
    fn add(self, rhs: &QOperator) -> QOperator {
        self.try_add(rhs).expect("operator add: mode spaces differ")
    }
}

impl std::ops::Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        self.try_add(&rhs.scaled(-ONE))
            .expect("operator sub: mode spaces differ")
    }
}

impl std::ops::Mul for &QOperator {
    type Output = QOperator;
    /// Panics on mode-space mismatch; use [`QOperator::try_mul`] to handle it.
    fn mul(self, rhs: &QOperator) -> QOperator {
        self.try_mul(rhs).expect("operator mul: mode spaces differ")
    }
}

/// Single-mode annihilation operator: `<n-1| a |n> = sqrt(n)`.
pub fn annihilation(dim: usize) -> Result<QOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let space = ModeSpace::new(vec![dim])?;
    let triplets = (1..dim)
        .map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0)))
        .collect();
    QOperator::from_triplets(&space, triplets)
}

/// Single-mode creation operator.
pub fn creation(dim: usize) -> Result<QOperator> {
    Ok(annihilation(dim)?.dagger())
}

/// Single-mode number operator.
pub fn number(dim: usize) -> Result<QOperator> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let space = ModeSpace::new(vec![dim])?;
    let triplets = (1..dim)
        .map(|n| (n, n, Complex64::new(n as f64, 0.0)))
        .collect();
    QOperator::from_triplets(&space, triplets)
}

/// Embed a single-mode operator at `slot` of a composite space, identity on
/// all other modes.
pub fn embed(op: &QOperator, slot: usize, space: &ModeSpace) -> Result<QOperator> {
    if slot >= space.num_modes() {
        return Err(Error::SlotOutOfRange {
            slot,
            num_modes: space.num_modes(),
        });
    }
    if op.space.num_modes() != 1 {
        return Err(Error::WrongModeCount {
            expected: 1,
            got: op.space.num_modes(),
        });
    }
    let d = space.dims()[slot];
    if op.dim() != d {
        return Err(Error::EmbedDimensionMismatch {
            op_dim: op.dim(),
            mode_dim: d,
            slot,
        });
    }
    let before: usize = space.dims()[..slot].iter().product();
    let after: usize = space.dims()[slot + 1..].iter().product();
    let mut triplets = Vec::with_capacity(op.nnz() * before * after);
    for (r, c, v) in op.entries() {
        for b in 0..before {
            let base_r = (b * d + r) * after;
            let base_c = (b * d + c) * after;
            for a in 0..after {
                triplets.push((base_r + a, base_c + a, v));
            }
        }
    }
    QOperator::from_triplets(space, triplets)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &QOperator, b: &QOperator) -> Result<QOperator> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    Ok(&ab - &ba)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn annihilation_matches_sqrt_n_rule() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 1), c(1.0));

        let a = annihilation(3).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!(a.get(1, 2), c(2f64.sqrt()));
        assert_eq!(a.get(2, 2), c(0.0));

        let a = annihilation(7).unwrap();
        for n in 1..7 {
            assert!((a.get(n - 1, n) - c((n as f64).sqrt())).norm() == 0.0);
        }
    }

    #[test]
    fn annihilation_rejects_trivial_dimension() {
        assert!(matches!(
            annihilation(1),
            Err(Error::InvalidDimension { dim: 1 })
        ));
        assert!(annihilation(0).is_err());
    }

    #[test]
    fn number_operator_eigenvalue() {
        // a†a |2> = 2 |2>
        let n_op = number(4).unwrap();
        let mut psi = vec![Complex64::default(); 4];
        psi[2] = c(1.0);
        let out = n_op.apply(&psi);
        assert_eq!(out[2], c(2.0));
        // and a†a agrees with the product form
        let a = annihilation(4).unwrap();
        let prod = &a.dagger() * &a;
        assert_eq!(prod, n_op);
    }

    #[test]
    fn embed_acts_on_selected_slot() {
        let space = ModeSpace::new(vec![2, 2]).unwrap();
        let a0 = embed(&annihilation(2).unwrap(), 0, &space).unwrap();
        // |1,1> -> |0,1>
        let mut psi = vec![Complex64::default(); 4];
        psi[space.index_of(&[1, 1])] = c(1.0);
        let out = a0.apply(&psi);
        assert_eq!(out[space.index_of(&[0, 1])], c(1.0));
        assert_eq!(out.iter().map(|v| v.norm_sqr()).sum::<f64>(), 1.0);
    }

    #[test]
    fn embed_identity_is_identity() {
        let space = ModeSpace::new(vec![3, 4, 2]).unwrap();
        let id1 = QOperator::identity(&ModeSpace::new(vec![4]).unwrap());
        let embedded = embed(&id1, 1, &space).unwrap();
        assert_eq!(embedded, QOperator::identity(&space));
    }

    #[test]
    fn embed_errors() {
        let space = ModeSpace::new(vec![2, 3]).unwrap();
        let a = annihilation(2).unwrap();
        assert!(matches!(
            embed(&a, 2, &space),
            Err(Error::SlotOutOfRange { slot: 2, .. })
        ));
        assert!(matches!(
            embed(&a, 1, &space),
            Err(Error::EmbedDimensionMismatch { op_dim: 2, mode_dim: 3, slot: 1 })
        ));
    }

    #[test]
    fn distinct_mode_operators_commute() {
        let space = ModeSpace::new(vec![3, 3]).unwrap();
        let a = embed(&annihilation(3).unwrap(), 0, &space).unwrap();
        let b = embed(&annihilation(3).unwrap(), 1, &space).unwrap();
        let comm = commutator(&a, &b).unwrap();
        assert_eq!(comm.nnz(), 0);
        let comm2 = commutator(&a, &b.dagger()).unwrap();
        assert_eq!(comm2.nnz(), 0);
    }

    #[test]
    fn truncation_safe_commutator() {
        // on dim 6, [a, a†] = 1 exactly on the n <= 4 subspace
        let a = annihilation(6).unwrap();
        let comm = commutator(&a, &a.dagger()).unwrap();
        for n in 0..=4 {
            assert!((comm.get(n, n) - c(1.0)).norm() < 1e-15);
        }
        // top level feels the truncation
        assert!((comm.get(5, 5) - c(-5.0)).norm() < 1e-15);
        for r in 0..6 {
            for cix in 0..6 {
                if r != cix {
                    assert_eq!(comm.get(r, cix), c(0.0));
                }
            }
        }
    }

    #[test]
    fn dagger_involution_and_hermitian_fixed_point() {
        let a = annihilation(5).unwrap();
        assert_eq!(a.dagger().dagger(), a);
        let h = &(&a + &a.dagger()) + &number(5).unwrap();
        assert_eq!(h.dagger(), h);
        assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn embed_preserves_sparsity_count() {
        let space = ModeSpace::new(vec![4, 3, 2]).unwrap();
        let a = annihilation(3).unwrap();
        let em = embed(&a, 1, &space).unwrap();
        assert_eq!(em.nnz(), a.nnz() * 4 * 2);
    }

    #[test]
    fn space_arithmetic_mismatch_is_reported() {
        let s1 = ModeSpace::new(vec![2, 2]).unwrap();
        let s2 = ModeSpace::new(vec![4]).unwrap();
        let x = QOperator::identity(&s1);
        let y = QOperator::identity(&s2);
        assert!(matches!(x.try_add(&y), Err(Error::SpaceMismatch { .. })));
        assert!(matches!(x.try_mul(&y), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn index_round_trip() {
        let space = ModeSpace::new(vec![4, 3, 5]).unwrap();
        for idx in 0..space.dim() {
            let occ = space.occupations_of(idx);
            assert_eq!(space.index_of(&occ), idx);
        }
        // slot 0 is most significant
        assert_eq!(space.index_of(&[1, 0, 0]), 15);
        assert_eq!(space.index_of(&[0, 1, 0]), 5);
        assert_eq!(space.index_of(&[0, 0, 1]), 1);
    }

    #[test]
    fn from_triplets_merges_duplicates_and_drops_zeros() {
        let space = ModeSpace::new(vec![3]).unwrap();
        let op = QOperator::from_triplets(
            &space,
            vec![
                (0, 1, c(1.0)),
                (0, 1, c(2.0)),
                (2, 2, c(1.0)),
                (2, 2, c(-1.0)),
            ],
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 1), c(3.0));
    }
}
