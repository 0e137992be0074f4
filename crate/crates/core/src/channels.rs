//! Kraus-operator channels: construction, completeness checking, lifting a
//! coin channel onto the walk space, and whole or per-branch application.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::op_algebra::{kron, ComplexMatrix, ZERO};
use crate::states::DensityOperator;

pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    label: String,
    params: BTreeMap<String, f64>,
}

/// Outcome of checking Σ A_j†A_j = I.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub max_deviation: f64,
    /// Entries of Σ A†A − I whose modulus exceeds the tolerance.
    pub violations: Vec<(usize, usize, f64)>,
}

impl CompletenessReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl KrausChannel {
    /// Validated constructor. All-zero operators are dropped.
    pub fn new(
        operators: Vec<ComplexMatrix>,
        label: impl Into<String>,
        params: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let ch = Self::unchecked(operators, label, params)?;
        let report = validate(&ch);
        if !report.is_ok() {
            return Err(Error::NotComplete {
                deviation: report.max_deviation,
            });
        }
        Ok(ch)
    }

    /// Builds a channel without the completeness check. Dimensions are still
    /// checked; use [`validate`] to inspect the result.
    pub fn unchecked(
        operators: Vec<ComplexMatrix>,
        label: impl Into<String>,
        params: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let dim = operators
            .first()
            .map(ComplexMatrix::dim)
            .ok_or_else(|| Error::invalid("a channel needs at least one Kraus operator"))?;
        if let Some(bad) = operators.iter().find(|op| op.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        let mut operators: Vec<_> = operators
            .into_iter()
            .filter(|op| op.as_slice().iter().any(|&z| z != ZERO))
            .collect();
        if operators.is_empty() {
            operators.push(ComplexMatrix::zeros(dim));
        }
        Ok(Self {
            operators,
            label: label.into(),
            params,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: dim,
            });
        }
        Ok(())
    }
}

pub fn identity_channel(dim: usize) -> KrausChannel {
    KrausChannel {
        operators: vec![ComplexMatrix::identity(dim)],
        label: "identity".into(),
        params: BTreeMap::new(),
    }
}

fn check_strength(mu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::invalid(format!("noise strength mu={mu} outside [0, 1]")));
    }
    Ok(())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Amplitude damping with A₀ = diag(√(1−μ), 1) and A₁ = √μ |1⟩⟨0|: the |0⟩
/// population decays into |1⟩.
pub fn amplitude_damping(mu: f64) -> Result<KrausChannel> {
    check_strength(mu)?;
    let a0 = ComplexMatrix::from_diag(&[real((1.0 - mu).sqrt()), real(1.0)]);
    let a1 = ComplexMatrix::from_vec(2, vec![ZERO, ZERO, real(mu.sqrt()), ZERO])?;
    KrausChannel::new(vec![a0, a1], "amplitude_damping", BTreeMap::from([("mu".into(), mu)]))
}

/// Textbook orientation: A₀ = diag(1, √(1−μ)), A₁ = √μ |0⟩⟨1|, so |1⟩
/// decays into |0⟩.
pub fn amplitude_damping_conventional(mu: f64) -> Result<KrausChannel> {
    check_strength(mu)?;
    let a0 = ComplexMatrix::from_diag(&[real(1.0), real((1.0 - mu).sqrt())]);
    let a1 = ComplexMatrix::from_vec(2, vec![ZERO, real(mu.sqrt()), ZERO, ZERO])?;
    KrausChannel::new(
        vec![a0, a1],
        "amplitude_damping_conventional",
        BTreeMap::from([("mu".into(), mu)]),
    )
}

/// Reports how far Σ A_j†A_j is from the identity.
pub fn validate(ch: &KrausChannel) -> CompletenessReport {
    let dim = ch.dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for op in &ch.operators {
        let term = op.adjoint().matmul(op).expect("operators share a dimension");
        sum.add_scaled_assign(&term, 1.0);
    }
    let mut max_deviation: f64 = 0.0;
    let mut violations = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (sum.get(i, j) - target).norm();
            max_deviation = max_deviation.max(dev);
            if dev > COMPLETENESS_TOL {
                violations.push((i, j, dev));
            }
        }
    }
    CompletenessReport {
        max_deviation,
        violations,
    }
}

/// Each coin Kraus operator A_j becomes A_j ⊗ I_L.
pub fn lift_to_walk(ch: &KrausChannel, lattice_size: usize) -> Result<KrausChannel> {
    if ch.dim() != 2 {
        return Err(Error::invalid(format!(
            "only coin (dim 2) channels can be lifted, got dim {}",
            ch.dim()
        )));
    }
    if lattice_size == 0 {
        return Err(Error::invalid("lattice size must be positive"));
    }
    let id = ComplexMatrix::identity(lattice_size);
    let operators = ch
        .operators
        .iter()
        .map(|a| kron(a, &id))
        .collect::<Result<Vec<_>>>()?;
    let mut params = ch.params.clone();
    params.insert("lattice_size".into(), lattice_size as f64);
    Ok(KrausChannel {
        operators,
        label: format!("{}⊗I", ch.label),
        params,
    })
}

/// Per-operator branches A_j ρ A_j†, neither summed nor renormalized.
pub fn branch_apply(ch: &KrausChannel, rho: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    ch.check_dim(rho.dim())?;
    ch.operators
        .iter()
        .map(|a| a.matmul(rho)?.matmul(&a.adjoint()))
        .collect()
}

/// Σ_j A_j ρ A_j†.
pub fn apply(ch: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    let mut acc = ComplexMatrix::zeros(rho.dim());
    for branch in branch_apply(ch, rho.matrix())? {
        acc.add_scaled_assign(&branch, 1.0);
    }
    DensityOperator::new(acc)
}
