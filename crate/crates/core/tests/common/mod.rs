//! Brute-force reference implementations shared by the integration tests.
//! Nothing here goes through the crate's matrix type or walk engine: the
//! operators are rebuilt from their definitions with nested loops over
//! plain `Vec`s.

#![allow(dead_code)]

use num_complex::Complex64;

pub type Dense = Vec<Vec<Complex64>>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn dense_zeros(n: usize) -> Dense {
    vec![vec![c(0.0); n]; n]
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = dense_zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = c(0.0);
            for k in 0..n {
                s += a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn dense_mat_vec(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn dense_kron_identity(a: &Dense, l: usize) -> Dense {
    let n = a.len() * l;
    let mut out = dense_zeros(n);
    for i in 0..a.len() {
        for j in 0..a.len() {
            for p in 0..l {
                out[i * l + p][j * l + p] = a[i][j];
            }
        }
    }
    out
}

/// One step unitary S·(C ⊗ I) on a lattice of `2 * half_width + 1` sites,
/// coin index slow.
pub fn walk_unitary(alpha: f64, half_width: usize) -> Dense {
    let l = 2 * half_width + 1;
    let coin = vec![
        vec![c(alpha.cos()), c(alpha.sin())],
        vec![c(alpha.sin()), c(-alpha.cos())],
    ];
    let mut shift = dense_zeros(2 * l);
    for p in 0..l {
        shift[(p + l - 1) % l][p] = c(1.0);
        shift[l + (p + 1) % l][l + p] = c(1.0);
    }
    dense_mul(&shift, &dense_kron_identity(&coin, l))
}

/// A_0 = diag(√(1−μ), 1), A_1 = √μ |1⟩⟨0|
pub fn damping_kraus(mu: f64) -> Vec<Dense> {
    vec![
        vec![vec![c((1.0 - mu).sqrt()), c(0.0)], vec![c(0.0), c(1.0)]],
        vec![vec![c(0.0), c(0.0)], vec![c(mu.sqrt()), c(0.0)]],
    ]
}

pub fn initial_vector(coin: [Complex64; 2], half_width: usize) -> Vec<Complex64> {
    let l = 2 * half_width + 1;
    let mut v = vec![c(0.0); 2 * l];
    v[half_width] = coin[0];
    v[l + half_width] = coin[1];
    v
}

pub fn default_coin() -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(s, 0.0), Complex64::new(0.0, s)]
}

/// Unnormalized trajectory vectors for every Kraus index sequence of length
/// `t`. The initial state is pure, so each branch ρ_J = |v_J⟩⟨v_J|.
pub fn branch_vectors(t: usize, mu: f64, alpha: f64, half_width: usize) -> Vec<Vec<Complex64>> {
    let l = 2 * half_width + 1;
    let u = walk_unitary(alpha, half_width);
    let kraus: Vec<Dense> = damping_kraus(mu).iter().map(|k| dense_kron_identity(k, l)).collect();
    let psi0 = initial_vector(default_coin(), half_width);
    let mut out = Vec::new();
    for code in 0..(1usize << t) {
        let mut v = psi0.clone();
        for step in 0..t {
            let j = (code >> (t - 1 - step)) & 1;
            v = dense_mat_vec(&kraus[j], &dense_mat_vec(&u, &v));
        }
        out.push(v);
    }
    out
}

pub fn projector(v: &[Complex64]) -> Dense {
    v.iter().map(|a| v.iter().map(|b| a * b.conj()).collect()).collect()
}

/// 2‖AB − BA‖² by nested loops.
pub fn dense_phi(a: &Dense, b: &Dense) -> f64 {
    let ab = dense_mul(a, b);
    let ba = dense_mul(b, a);
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            s += (ab[i][j] - ba[i][j]).norm_sqr();
        }
    }
    2.0 * s
}

/// Φ(|v⟩⟨v|, |w⟩⟨w|) = 4|⟨v|w⟩|² (‖v‖²‖w‖² − |⟨v|w⟩|²) for unnormalized vectors.
pub fn rank_one_phi(v: &[Complex64], w: &[Complex64]) -> f64 {
    let overlap: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
    let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let nw: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let o = overlap.norm_sqr();
    4.0 * o * (nv * nw - o)
}

/// Σ over all ordered pairs of trajectory branches, one pair at a time.
pub fn brute_force_phi_av(t: usize, mu: f64) -> f64 {
    let branches = branch_vectors(t, mu, std::f64::consts::FRAC_PI_4, t.max(1));
    let mut total = 0.0;
    for (i, v) in branches.iter().enumerate() {
        for (j, w) in branches.iter().enumerate() {
            if i != j {
                total += rank_one_phi(v, w);
            }
        }
    }
    total
}

/// Sequence of pure states of the noiseless walk, by dense matrix-vector
/// products.
pub fn noiseless_vectors(steps: usize, alpha: f64, half_width: usize) -> Vec<Vec<Complex64>> {
    let u = walk_unitary(alpha, half_width);
    let mut v = initial_vector(default_coin(), half_width);
    let mut out = vec![v.clone()];
    for _ in 0..steps {
        v = dense_mat_vec(&u, &v);
        out.push(v.clone());
    }
    out
}
