//! Dense complex square matrices and the handful of operations the rest of
//! the crate is built from.
//!
//! Storage is row-major: entry `(i, j)` lives at `i * dim + j`. Tensor
//! products follow the coin ⊗ position convention used by the walk, so the
//! left factor is always the slow index.

mod eigen;

pub use eigen::{hermitian_eigenvalues, is_positive_semidefinite, support_indices};

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest square side length any constructor or product is allowed to produce.
pub const MAX_DIM: usize = 4096;

/// Rows at or above this size are multiplied in parallel.
const PAR_MATMUL_DIM: usize = 96;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square lengths
    /// and non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        if dim > MAX_DIM {
            return Err(Error::Resource(format!(
                "dimension {dim} exceeds maximum {MAX_DIM}"
            )));
        }
        if data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("rows must all have length equal to the row count"));
        }
        Self::from_vec(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * dim + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_vec(dim, data)
    }

    /// Wraps kernel output that is finite by construction.
    pub(crate) fn from_raw(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.data[j * n + i].conj());
            }
        }
        Self::from_raw(n, out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::from_raw(self.dim, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_raw(self.dim, data))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|z| z * factor).collect())
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|z| z * factor).collect())
    }

    /// In-place `self += factor * other`.
    pub(crate) fn add_scaled_assign(&mut self, other: &Self, factor: f64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
    }

    /// Matrix product. Zero entries of the left factor are skipped, which
    /// makes products of the walk's parity-sparse states much cheaper than
    /// the dense O(n³) bound.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        let row_kernel = |(i, out_row): (usize, &mut [Complex64])| {
            let a_row = &self.data[i * n..(i + 1) * n];
            for (k, &a) in a_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        };
        if n >= PAR_MATMUL_DIM {
            out.par_chunks_mut(n).enumerate().for_each(row_kernel);
        } else {
            out.chunks_mut(n).enumerate().for_each(row_kernel);
        }
        Ok(Self::from_raw(n, out))
    }

    /// Σ|a_jk|², the squared Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// max_jk |a_jk − conj(a_kj)|
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// (A + A†)/2, bitwise Hermitian.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in i..n {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.hs_norm_sq()
}

/// Kronecker product `a ⊗ b`; the index of `a` is the slow one.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a
        .dim
        .checked_mul(b.dim)
        .filter(|&d| d <= MAX_DIM)
        .ok_or_else(|| {
            Error::Resource(format!(
                "kron of {}x{} and {}x{} exceeds maximum dimension {MAX_DIM}",
                a.dim, a.dim, b.dim, b.dim
            ))
        })?;
    let (na, nb) = (a.dim, b.dim);
    let mut out = vec![ZERO; dim * dim];
    for i in 0..na {
        for j in 0..na {
            let s = a.get(i, j);
            if s == ZERO {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * dim + j * nb;
                for l in 0..nb {
                    out[row + l] = s * b.get(k, l);
                }
            }
        }
    }
    Ok(ComplexMatrix::from_raw(dim, out))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_raw(2, vec![ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_raw(2, vec![ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_raw(2, vec![ONE, ZERO, ZERO, -ONE])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_commutes_with_everything() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0)],
            vec![c(0.0, 1.0), c(-2.0, 0.0), c(1.0, 1.0)],
            vec![c(4.0, 0.0), c(0.0, 0.0), c(0.0, -3.0)],
        ])
        .unwrap();
        let z = commutator(&ComplexMatrix::identity(3), &m).unwrap();
        assert_eq!(z, ComplexMatrix::zeros(3));
    }

    #[test]
    fn pauli_commutator() {
        let xz = commutator(&pauli_x(), &pauli_z()).unwrap();
        let expected = pauli_y().scale(c(0.0, -2.0));
        assert!(xz.max_abs_diff(&expected).unwrap() < 1e-15);
        assert_eq!(xz.hs_norm_sq(), 8.0);
    }

    #[test]
    fn diagonal_matrices_commute() {
        let a = ComplexMatrix::from_real_diag(&[1.0, -2.0, 0.5]);
        let b = ComplexMatrix::from_real_diag(&[3.0, 0.25, 7.0]);
        assert_eq!(commutator(&a, &b).unwrap(), ComplexMatrix::zeros(3));
    }

    #[test]
    fn commutator_rejects_mismatched_dims() {
        let err = commutator(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn hs_norm_basics() {
        assert_eq!(hs_norm_sq(&ComplexMatrix::zeros(3)), 0.0);
        assert_eq!(hs_norm_sq(&ComplexMatrix::identity(5)), 5.0);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap(),
            ComplexMatrix::identity(6)
        );
        assert_eq!(
            kron(&pauli_z(), &ComplexMatrix::identity(2)).unwrap(),
            ComplexMatrix::from_real_diag(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_respects_dimension_cap() {
        let big = ComplexMatrix::identity(100);
        assert!(matches!(kron(&big, &big), Err(Error::Resource(_))));
    }

    #[test]
    fn trace_and_adjoint() {
        assert_eq!(ComplexMatrix::identity(7).trace(), c(7.0, 0.0));
        let m = ComplexMatrix::from_rows(vec![vec![c(1.0, 1.0), c(2.0, -3.0)], vec![c(0.0, 4.0), c(5.0, 0.0)]]).unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.adjoint().get(0, 1), c(0.0, -4.0));
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(ComplexMatrix::from_vec(2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::from_vec(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_vec(0, vec![]).is_err());
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let r = ComplexMatrix::identity(2).matmul(&ComplexMatrix::identity(4));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn parallel_and_serial_matmul_agree() {
        let n = PAR_MATMUL_DIM + 3;
        let a = ComplexMatrix::from_raw(
            n,
            (0..n * n).map(|k| c((k % 7) as f64 - 3.0, (k % 5) as f64 * 0.5)).collect(),
        );
        let b = a.adjoint();
        let par = a.matmul(&b).unwrap();
        let mut serial = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v: Complex64 = (0..n).map(|k| a.get(i, k) * b.get(k, j)).sum();
                serial.set(i, j, v);
            }
        }
        assert!(par.max_abs_diff(&serial).unwrap() < 1e-9);
    }
}
