//! Validated quantum states and the constructors used throughout the crate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::op_algebra::{hermitian_eigenvalues, is_positive_semidefinite, ComplexMatrix, ONE, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-10;

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::invalid("state vector must be nonempty"));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state vector has squared norm {norm_sq}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` before validating.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// Computational basis vector |index⟩ in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::invalid(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self::new(v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix. Invariants are checked
/// eagerly on construction and the stored matrix is exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        validate_density(&matrix)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Tr ρ², computed as the squared HS norm (ρ is Hermitian).
    pub fn purity(&self) -> f64 {
        self.matrix.hs_norm_sq()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

/// Checks Hermiticity, unit trace and positivity against the crate-wide
/// tolerances.
pub fn validate_density(m: &ComplexMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::invalid("density matrix has non-finite entries"));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotUnitTrace { trace });
    }
    if !is_positive_semidefinite(&m.hermitian_part(), PSD_TOL) {
        return Err(Error::NotPositive { tolerance: PSD_TOL });
    }
    Ok(())
}

pub fn density_from_pure(psi: &PureState) -> Result<DensityOperator> {
    let a = psi.amplitudes();
    DensityOperator::new(ComplexMatrix::outer(a, a)?)
}

/// Convex combination Σ w_j ρ_j.
pub fn mixture(weights: &[f64], states: &[DensityOperator]) -> Result<DensityOperator> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::invalid(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::invalid("mixture weights must be nonnegative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("mixture weights sum to {total}, expected 1")));
    }
    let dim = states[0].dim();
    let mut acc = ComplexMatrix::zeros(dim);
    for (&w, s) in weights.iter().zip(states) {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: s.dim(),
            });
        }
        acc.add_scaled_assign(s.matrix(), w);
    }
    DensityOperator::new(acc)
}

/// Projectors onto |0⟩ and cos θ|0⟩ + sin θ|1⟩.
pub fn rotated_pure_pair(theta: f64) -> Result<(DensityOperator, DensityOperator)> {
    let first = PureState::basis(2, 0)?;
    let second = PureState::new(vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(theta.sin(), 0.0),
    ])?;
    Ok((density_from_pure(&first)?, density_from_pure(&second)?))
}

/// |0⟩⟨0| and the projector onto the uniform superposition in dimension `d`,
/// one vector from each of a mutually unbiased pair of bases.
pub fn mub_pair(d: usize) -> Result<(DensityOperator, DensityOperator)> {
    if d < 2 {
        return Err(Error::invalid(format!("MUB pair needs d >= 2, got {d}")));
    }
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let uniform = PureState::new(vec![amp; d])?;
    Ok((density_from_pure(&PureState::basis(d, 0)?)?, density_from_pure(&uniform)?))
}
