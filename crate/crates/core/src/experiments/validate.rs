//! Built-in invariant suite run by the `validate` subcommand. Sizes are kept
//! small so the whole suite finishes in a few seconds.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{amplitude_damping, amplitude_damping_conventional, apply, validate as completeness};
use crate::error::Result;
use crate::measures::{phi, phi_mub_analytic, phi_pure_analytic};
use crate::op_algebra::{hermitian_eigenvalues, ComplexMatrix};
use crate::random;
use crate::states::{density_from_pure, mub_pair, rotated_pure_pair, DensityOperator};
use crate::walk::{position_distribution, Walk, WalkConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("phi_range", phi_range),
    ("phi_symmetry", phi_symmetry),
    ("pure_pair_oracle", pure_pair_oracle),
    ("mub_oracle", mub_oracle),
    ("convexity_bound", convexity_bound),
    ("unitary_invariance", unitary_invariance),
    ("eigenvalue_trace", eigenvalue_trace),
    ("channel_completeness", channel_completeness),
    ("channel_trace", channel_trace),
    ("walk_unitarity", walk_unitarity),
    ("fast_vs_dense_step", fast_vs_dense_step),
    ("branch_sum", branch_sum),
    ("noiseless_support", noiseless_support),
];

pub fn run_invariant_suite(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(&mut rng) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome { name, passed, detail }
        })
        .collect()
}

fn worst(label: &str, value: f64, limit: f64) -> (bool, String) {
    (value <= limit, format!("{label} {value:.3e} (limit {limit:.0e})"))
}

fn phi_range(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..2000 {
        let d = rng.random_range(2..=8);
        let v = phi(&random::density(rng, d, 4), &random::density(rng, d, 4))?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo >= -1e-12 && hi <= 1.0 + 1e-12, format!("phi in [{lo:.3e}, {hi:.6}]")))
}

fn phi_symmetry(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for _ in 0..500 {
        let d = rng.random_range(2..=8);
        let (a, b) = (random::density(rng, d, 4), random::density(rng, d, 4));
        dev = dev.max((phi(&a, &b)? - phi(&b, &a)?).abs());
    }
    Ok(worst("max asymmetry", dev, 1e-14))
}

fn pure_pair_oracle(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for k in 0..100 {
        let theta = FRAC_PI_2 * k as f64 / 99.0;
        let (a, b) = rotated_pure_pair(theta)?;
        dev = dev.max((phi(&a, &b)? - phi_pure_analytic(theta)).abs());
    }
    Ok(worst("max deviation from sin^2(2theta)", dev, 1e-10))
}

fn mub_oracle(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for d in 2..=8 {
        let (a, b) = mub_pair(d)?;
        dev = dev.max((phi(&a, &b)? - phi_mub_analytic(d)?).abs());
    }
    Ok(worst("max deviation from 4(d-1)/d^2", dev, 1e-10))
}

fn convexity_bound(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut slack = f64::INFINITY;
    for _ in 0..200 {
        let d = rng.random_range(2..=6);
        let (k1, k2) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let (p, psi) = random::ensemble(rng, d, k1);
        let (q, chi) = random::ensemble(rng, d, k2);
        let lhs = phi(&random::mixed_from_ensemble(&p, &psi)?, &random::mixed_from_ensemble(&q, &chi)?)?;
        let mut rhs = 0.0;
        for (pj, a) in p.iter().zip(&psi) {
            for (qk, b) in q.iter().zip(&chi) {
                rhs += pj * qk * phi(&density_from_pure(a)?, &density_from_pure(b)?)?;
            }
        }
        slack = slack.min(rhs + 1e-10 - lhs);
    }
    Ok((slack >= 0.0, format!("min slack {slack:.3e}")))
}

fn unitary_invariance(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=8);
        let (a, b) = (random::density(rng, d, 4), random::density(rng, d, 4));
        let u = random::unitary(rng, d);
        let rot = |m: &DensityOperator| -> Result<DensityOperator> {
            DensityOperator::new(u.matmul(m.matrix())?.matmul(&u.adjoint())?)
        };
        dev = dev.max((phi(&a, &b)? - phi(&rot(&a)?, &rot(&b)?)?).abs());
    }
    Ok(worst("max change under joint unitary", dev, 1e-11))
}

fn eigenvalue_trace(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut ok = true;
    let mut dev: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=8);
        let h = random::hermitian(rng, d);
        let ev = hermitian_eigenvalues(&h)?;
        let e = (ev.iter().sum::<f64>() - h.trace().re).abs();
        ok &= e <= 1e-9 * d as f64;
        dev = dev.max(e);
    }
    Ok((ok, format!("max |sum(eig) - trace| {dev:.3e}")))
}

fn channel_completeness(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for k in 0..100 {
        let mu = k as f64 / 99.0;
        dev = dev.max(completeness(&amplitude_damping(mu)?).max_deviation);
        dev = dev.max(completeness(&amplitude_damping_conventional(mu)?).max_deviation);
    }
    Ok(worst("max completeness deviation", dev, 1e-14))
}

fn channel_trace(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for _ in 0..1000 {
        let ch = amplitude_damping(rng.random::<f64>())?;
        let out = apply(&ch, &random::density(rng, 2, 3))?;
        dev = dev.max((out.matrix().trace().re - 1.0).abs());
    }
    Ok(worst("max trace drift", dev, 1e-9))
}

fn walk_unitarity(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut dev: f64 = 0.0;
    for k in 0..8 {
        let walk = Walk::new(WalkConfig::new(5).with_alpha(0.4 * k as f64))?;
        let u = walk.unitary_dense()?;
        dev = dev.max(u.adjoint().matmul(&u)?.max_abs_diff(&ComplexMatrix::identity(u.dim()))?);
    }
    Ok(worst("max |U^dag U - I|", dev, 1e-13))
}

fn fast_vs_dense_step(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let walk = Walk::new(WalkConfig::new(20).with_mu(0.3))?;
    let mut fast = walk.initial_state()?;
    let mut dense = fast.clone();
    for _ in 0..20 {
        fast = walk.step(&fast)?;
        dense = walk.step_dense(&dense)?;
    }
    Ok(worst("max deviation after 20 steps", fast.matrix().max_abs_diff(dense.matrix())?, 1e-11))
}

fn branch_sum(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let walk = Walk::new(WalkConfig::new(3).with_mu(0.4))?;
    let history = walk.evolve()?;
    let mut sum = ComplexMatrix::zeros(walk.dim());
    for b in walk.trajectory_branches(3)? {
        sum = sum.add(&b)?;
    }
    Ok(worst("max |sum(branches) - rho(3)|", sum.max_abs_diff(history.states[3].matrix())?, 1e-10))
}

fn noiseless_support(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let walk = Walk::new(WalkConfig::new(20))?;
    let mut worst_leak: f64 = 0.0;
    for (t, state) in walk.states().enumerate() {
        let d = position_distribution(&state?)?;
        for (x, &p) in d.positions().zip(&d.probabilities) {
            if x.abs() > t as i64 || (x + t as i64) % 2 != 0 {
                worst_leak = worst_leak.max(p);
            }
        }
    }
    Ok(worst("max probability outside parity light cone", worst_leak, 1e-12))
}
