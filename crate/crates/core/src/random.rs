//! Random test ensembles: Gaussian pure states, finite mixtures, Hermitian
//! matrices and unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::op_algebra::{ComplexMatrix, ZERO};
use crate::states::{density_from_pure, mixture, DensityOperator, PureState};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed (Haar) pure state.
pub fn pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Random probability vector of length `k`.
pub fn weights(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// An ensemble {p_j, ψ_j} with `components` members.
pub fn ensemble(rng: &mut impl Rng, dim: usize, components: usize) -> (Vec<f64>, Vec<PureState>) {
    let w = weights(rng, components);
    let states = (0..components).map(|_| pure_state(rng, dim)).collect();
    (w, states)
}

pub fn mixed_from_ensemble(weights: &[f64], states: &[PureState]) -> Result<DensityOperator> {
    let projectors = states.iter().map(density_from_pure).collect::<Result<Vec<_>>>()?;
    mixture(weights, &projectors)
}

/// Mixture of `1..=max_components` random pure states.
pub fn density(rng: &mut impl Rng, dim: usize, max_components: usize) -> DensityOperator {
    let k = rng.random_range(1..=max_components.max(1));
    let (w, s) = ensemble(rng, dim, k);
    mixed_from_ensemble(&w, &s).expect("random ensembles are valid states")
}

pub fn hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(dim, data)
        .expect("finite gaussian entries")
        .hermitian_part()
}

pub fn matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(dim, data).expect("finite gaussian entries")
}

/// Unitary from Gram–Schmidt on the columns of a Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut data = vec![ZERO; dim * dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            data[i * dim + j] = z;
        }
    }
    ComplexMatrix::from_vec(dim, data).expect("finite unitary entries")
}
