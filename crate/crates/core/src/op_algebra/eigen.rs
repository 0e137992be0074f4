//! Spectral checks used on validation paths only.

use num_complex::Complex64;

use super::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Indices whose row or column holds a nonzero entry. Every other index
/// spans an exact null block, so spectral work can be restricted to these.
pub fn support_indices(a: &ComplexMatrix) -> Vec<usize> {
    let n = a.dim();
    let mut keep = vec![false; n];
    for i in 0..n {
        for (j, &z) in a.row(i).iter().enumerate() {
            if z != ZERO {
                keep[i] = true;
                keep[j] = true;
            }
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

fn compress(a: &ComplexMatrix, idx: &[usize]) -> Vec<Complex64> {
    let m = idx.len();
    let mut out = Vec::with_capacity(m * m);
    for &i in idx {
        for &j in idx {
            out.push(a.get(i, j));
        }
    }
    out
}

/// All eigenvalues of a Hermitian matrix in nondecreasing order, by cyclic
/// Jacobi rotations.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let deviation = a.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim();
    let idx = support_indices(a);
    let mut values = vec![0.0; n - idx.len()];
    if !idx.is_empty() {
        let mut work = compress(&a.hermitian_part(), &idx);
        values.extend(jacobi(&mut work, idx.len())?);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let threshold = 1e-12 * n as f64 * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) < threshold {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(a, n, p, q);
            }
        }
    }
    if off_diagonal_norm(a, n) < threshold {
        return Ok((0..n).map(|i| a[i * n + i].re).collect());
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Annihilates `a[p][q]` with the unitary G = diag(1, e^{-iφ}) · R(θ) acting
/// on the (p, q) plane, where e^{iφ} is the phase of `a[p][q]`.
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_minus = phase.conj();

    // columns: A ← A G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * e_minus * s;
        a[k * n + q] = akp * s + akq * e_minus * c;
    }
    // rows: A ← G† A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

/// True when the smallest eigenvalue of the Hermitian part of `a` is at least
/// `-tolerance`, decided by attempting a Cholesky factorization of
/// `a + tolerance·I` on the support of `a`.
pub fn is_positive_semidefinite(a: &ComplexMatrix, tolerance: f64) -> bool {
    let idx = support_indices(a);
    let m = idx.len();
    if m == 0 {
        return true;
    }
    let w = compress(a, &idx);
    let mut l = vec![ZERO; m * m];
    for j in 0..m {
        let mut d = w[j * m + j].re + tolerance;
        for k in 0..j {
            d -= l[j * m + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let ljj = d.sqrt();
        l[j * m + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..m {
            let mut s = w[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k].conj();
            }
            l[i * m + j] = s / ljj;
        }
    }
    true
}
