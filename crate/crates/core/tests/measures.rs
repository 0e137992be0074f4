mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantumness::measures::{
    lagged_phi, phi, phi_av, phi_av_sampled, phi_delta_series, phi_matrices, phi_relative, QuantumnessSeries,
};
use quantumness::states::{density_from_pure, mub_pair, rotated_pure_pair};
use quantumness::walk::evolve;
use quantumness::{random, ComplexMatrix, DensityOperator, Walk, WalkConfig};

/// Φ_av from the brute-force oracle, frozen at 17 digits: (t, μ, value).
const FROZEN_PHI_AV: &[(usize, f64, f64)] = &[
    (2, 0.3, 9.64805625000000541e-3),
    (4, 0.3, 7.19903701012092941e-3),
    (8, 0.3, 2.38237719327266152e-3),
    (2, 0.7, 1.96088812500000258e-2),
    (4, 0.7, 3.68222778579748713e-3),
    (8, 0.7, 1.03795161760485830e-4),
];

#[test]
fn oracle_reproduces_frozen_values() {
    for &(t, mu, expected) in FROZEN_PHI_AV {
        let got = common::brute_force_phi_av(t, mu);
        assert!((got - expected).abs() < 1e-15, "t={t} mu={mu}: {got:e} vs {expected:e}");
    }
}

#[test]
fn rank_one_formula_matches_dense_commutator() {
    let branches = common::branch_vectors(3, 0.4, FRAC_PI_4, 3);
    for v in &branches {
        for w in &branches {
            let dense = common::dense_phi(&common::projector(v), &common::projector(w));
            assert!((dense - common::rank_one_phi(v, w)).abs() < 1e-14);
        }
    }
}

#[test]
fn exact_phi_av_matches_brute_force() {
    for &mu in &[0.3, 0.7] {
        for t in 1..=8 {
            let exact = phi_av(&WalkConfig::new(t).with_mu(mu), t).unwrap();
            let oracle = common::brute_force_phi_av(t, mu);
            assert!((exact - oracle).abs() < 1e-10, "t={t} mu={mu}: {exact:e} vs {oracle:e}");
        }
    }
}

#[test]
fn phi_av_vanishes_without_noise() {
    assert_eq!(phi_av(&WalkConfig::new(5), 5).unwrap(), 0.0);
    let s = phi_av_sampled(&WalkConfig::new(5), 5, 50, 1).unwrap();
    assert_eq!((s.estimate, s.std_error), (0.0, 0.0));
}

#[test]
fn sampled_estimate_within_three_standard_errors() {
    let cfg = WalkConfig::new(6).with_mu(0.3);
    let exact = phi_av(&cfg, 6).unwrap();
    let s = phi_av_sampled(&cfg, 6, 10_000, 2024).unwrap();
    assert!(s.std_error > 0.0);
    assert!(
        (s.estimate - exact).abs() <= 3.0 * s.std_error,
        "estimate {} +- {} vs exact {exact}",
        s.estimate,
        s.std_error
    );
}

#[test]
fn sampled_estimate_is_deterministic() {
    let cfg = WalkConfig::new(4).with_mu(0.5);
    assert_eq!(phi_av_sampled(&cfg, 4, 500, 9).unwrap(), phi_av_sampled(&cfg, 4, 500, 9).unwrap());
}

#[test]
fn lagged_phi_matches_dense_reference() {
    let states = common::noiseless_vectors(30, FRAC_PI_4, 30);
    let walk = Walk::new(WalkConfig::new(30)).unwrap();
    let series = lagged_phi(&walk, &[1, 2, 3], &[10, 20, 30]).unwrap();
    for (delta, s) in [1, 2, 3].into_iter().zip(&series) {
        for (t, value) in s.iter() {
            let expected = common::rank_one_phi(&states[t], &states[t - delta]);
            assert!((value - expected).abs() < 1e-12, "delta={delta} t={t}");
        }
    }
}

#[test]
fn zero_lag_is_identically_zero() {
    let h = evolve(&WalkConfig::new(10).with_mu(0.2)).unwrap();
    assert!(phi_delta_series(&h, 0).unwrap().values.iter().all(|&v| v.abs() < 1e-12));
}

#[test]
fn unitary_lag_two_is_one() {
    let h = evolve(&WalkConfig::new(40)).unwrap();
    for (t, v) in phi_delta_series(&h, 2).unwrap().iter() {
        assert!((v - 1.0).abs() < 1e-9, "t={t}: {v}");
    }
}

#[test]
fn noise_lowers_lag_two_value() {
    let quiet = evolve(&WalkConfig::new(30)).unwrap();
    let noisy = evolve(&WalkConfig::new(30).with_mu(0.5)).unwrap();
    let q = phi_delta_series(&quiet, 2).unwrap();
    let n = phi_delta_series(&noisy, 2).unwrap();
    for ((t, a), b) in q.iter().zip(&n.values).skip(1) {
        assert!(*b < a, "t={t}");
    }
}

#[test]
fn relative_drops_tiny_denominators() {
    let num = QuantumnessSeries::new(vec![1, 2, 3], vec![0.5, 0.2, 0.1], "n").unwrap();
    let den = QuantumnessSeries::new(vec![1, 2, 3], vec![1.0, 0.0, 0.5], "d").unwrap();
    let rel = phi_relative(&num, &den).unwrap();
    assert_eq!(rel.times, vec![1, 3]);
    assert_eq!(rel.values, vec![0.5, 0.2]);
    assert_eq!(phi_relative(&den, &den).unwrap().values, vec![1.0, 1.0]);
}

#[test]
fn pure_pair_grid() {
    for k in 0..100 {
        let theta = FRAC_PI_2 * k as f64 / 99.0;
        let (a, b) = rotated_pure_pair(theta).unwrap();
        assert!((phi(&a, &b).unwrap() - (2.0 * theta).sin().powi(2)).abs() < 1e-10);
    }
}

#[test]
fn mub_values() {
    for d in 2..=8 {
        let (a, b) = mub_pair(d).unwrap();
        let expected = 4.0 * (d as f64 - 1.0) / (d * d) as f64;
        assert!((phi(&a, &b).unwrap() - expected).abs() < 1e-10, "d={d}");
    }
}

#[test]
fn classical_pairs_commute() {
    let a = DensityOperator::new(ComplexMatrix::from_real_diag(&[0.2, 0.3, 0.5])).unwrap();
    let b = DensityOperator::new(ComplexMatrix::from_real_diag(&[0.6, 0.1, 0.3])).unwrap();
    assert_eq!(phi(&a, &b).unwrap(), 0.0);
}

fn pair(seed: u64) -> (DensityOperator, DensityOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 2 + (seed % 7) as usize;
    (random::density(&mut rng, d, 4), random::density(&mut rng, d, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn phi_in_unit_interval(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let v = phi(&a, &b).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn phi_symmetric(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        prop_assert!((phi(&a, &b).unwrap() - phi(&b, &a).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn phi_unitarily_invariant(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = random::unitary(&mut rng, a.dim());
        let rot = |m: &DensityOperator| u.matmul(m.matrix()).unwrap().matmul(&u.adjoint()).unwrap();
        let moved = phi_matrices(&rot(&a), &rot(&b)).unwrap();
        prop_assert!((phi(&a, &b).unwrap() - moved).abs() < 1e-11);
    }

    #[test]
    fn phi_convexity_bound(seed in any::<u64>(), k1 in 1usize..5, k2 in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 2 + (seed % 5) as usize;
        let (p, psi) = random::ensemble(&mut rng, d, k1);
        let (q, chi) = random::ensemble(&mut rng, d, k2);
        let lhs = phi(
            &random::mixed_from_ensemble(&p, &psi).unwrap(),
            &random::mixed_from_ensemble(&q, &chi).unwrap(),
        ).unwrap();
        let mut rhs = 0.0;
        for (pj, a) in p.iter().zip(&psi) {
            for (qk, b) in q.iter().zip(&chi) {
                rhs += pj * qk * phi(&density_from_pure(a).unwrap(), &density_from_pure(b).unwrap()).unwrap();
            }
        }
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn self_phi_is_zero(seed in any::<u64>()) {
        let (a, _) = pair(seed);
        prop_assert!(phi(&a, &a).unwrap().abs() < 1e-15);
    }
}
