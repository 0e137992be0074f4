mod common;

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantumness::op_algebra::kron;
use quantumness::walk::{coin_operator, position_distribution, shift_operator, ChannelSpec, PositionDistribution};
use quantumness::{random, ComplexMatrix, DensityOperator, Walk, WalkConfig};

fn final_distribution(cfg: WalkConfig) -> PositionDistribution {
    let walk = Walk::new(cfg).unwrap();
    let last = walk.states().last().unwrap().unwrap();
    position_distribution(&last).unwrap()
}

#[test]
fn unitary_is_unitary() {
    for k in 0..6 {
        let walk = Walk::new(WalkConfig::new(6).with_alpha(0.3 + 0.5 * k as f64)).unwrap();
        let u = walk.unitary_dense().unwrap();
        let id = ComplexMatrix::identity(u.dim());
        assert!(u.adjoint().matmul(&u).unwrap().max_abs_diff(&id).unwrap() < 1e-13);
        assert!(u.matmul(&u.adjoint()).unwrap().max_abs_diff(&id).unwrap() < 1e-13);
    }
}

#[test]
fn permuted_shift_matches_dense_on_random_states() {
    let w = shift_operator(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let rho = random::density(&mut rng, 18, 5);
        let fast = w.conjugate_permuted(rho.matrix()).unwrap();
        let dense = w.conjugate_dense(rho.matrix()).unwrap();
        assert!(fast.max_abs_diff(&dense).unwrap() < 1e-13);
    }
}

#[test]
fn fast_step_matches_dense_step() {
    for mu in [0.0, 0.25, 0.8] {
        let walk = Walk::new(WalkConfig::new(20).with_mu(mu)).unwrap();
        let mut fast = walk.initial_state().unwrap();
        let mut dense = fast.clone();
        for _ in 0..20 {
            fast = walk.step(&fast).unwrap();
            dense = walk.step_dense(&dense).unwrap();
        }
        assert!(fast.matrix().max_abs_diff(dense.matrix()).unwrap() < 1e-11, "mu={mu}");
    }
}

#[test]
fn noiseless_walk_matches_dense_reference() {
    let reference = common::noiseless_vectors(25, FRAC_PI_4, 25);
    let walk = Walk::new(WalkConfig::new(25)).unwrap();
    for (t, state) in walk.states().enumerate() {
        let expected = common::projector(&reference[t]);
        let m = state.unwrap();
        for (i, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((m.matrix().get(i, j) - e).norm() < 1e-12, "t={t} ({i},{j})");
            }
        }
    }
}

#[test]
fn parity_light_cone() {
    let walk = Walk::new(WalkConfig::new(40)).unwrap();
    for (t, state) in walk.states().enumerate() {
        let d = position_distribution(&state.unwrap()).unwrap();
        for x in d.positions() {
            if x.abs() > t as i64 || (x + t as i64) % 2 != 0 {
                assert!(d.prob(x) < 1e-12, "t={t} x={x}");
            }
        }
    }
}

#[test]
fn no_wraparound_at_default_width() {
    let steps = 30;
    let tight = final_distribution(WalkConfig::new(steps).with_mu(0.3));
    let wide = final_distribution(WalkConfig::new(steps).with_mu(0.3).with_half_width(2 * steps));
    for x in -(steps as i64)..=steps as i64 {
        assert!((tight.prob(x) - wide.prob(x)).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn trace_and_positivity_over_long_runs() {
    for (steps, mu) in [(100, 0.0), (200, 0.3), (100, 1.0)] {
        let walk = Walk::new(WalkConfig::new(steps).with_mu(mu)).unwrap();
        let mut last = None;
        for (t, state) in walk.states().enumerate() {
            let s = state.unwrap();
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-9, "mu={mu} t={t}");
            last = Some(s);
        }
        assert!(last.unwrap().min_eigenvalue().unwrap() >= -1e-9, "mu={mu}");
    }
}

#[test]
fn purity_decays_under_noise() {
    let walk = Walk::new(WalkConfig::new(30).with_mu(0.2)).unwrap();
    let purities: Vec<f64> = walk.states().map(|s| s.unwrap().purity()).collect();
    assert!((purities[0] - 1.0).abs() < 1e-12);
    assert!(purities[2..].iter().all(|&p| p < 1.0 - 1e-6));
    assert!(purities[30] < purities[10]);
    let clean = Walk::new(WalkConfig::new(30)).unwrap();
    assert!(clean.states().all(|s| (s.unwrap().purity() - 1.0).abs() < 1e-10));
}

#[test]
fn ballistic_spreading() {
    let walk = Walk::new(WalkConfig::new(100)).unwrap();
    let h = walk.evolve().unwrap();
    let ratio = h.distribution(100).unwrap().std_dev() / h.distribution(50).unwrap().std_dev();
    assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
}

/// Strong damping narrows the spread and pushes the shape toward a single
/// bump (kurtosis toward 3). It does not reach a Gaussian at t = 100.
#[test]
fn strong_damping_narrows_distribution() {
    let clean = final_distribution(WalkConfig::new(100));
    let noisy = final_distribution(WalkConfig::new(100).with_mu(0.5));
    assert!(noisy.std_dev() < clean.std_dev());
    assert!(noisy.kurtosis() > clean.kurtosis());
    assert!(noisy.kurtosis() < 3.0);
    assert!((noisy.total() - 1.0).abs() < 1e-9);
}

#[test]
fn coin_similarity_leaves_position_marginal() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let v = kron(&coin_operator(FRAC_PI_4), &ComplexMatrix::identity(5)).unwrap();
    for _ in 0..10 {
        let rho = random::density(&mut rng, 10, 4);
        let moved = DensityOperator::new(v.matmul(rho.matrix()).unwrap().matmul(&v.adjoint()).unwrap()).unwrap();
        let (a, b) = (position_distribution(&rho).unwrap(), position_distribution(&moved).unwrap());
        for (p, q) in a.probabilities.iter().zip(&b.probabilities) {
            assert!((p - q).abs() < 1e-14);
        }
    }
}

#[test]
fn branch_sum_reproduces_state() {
    for mu in [0.1, 0.5, 0.9] {
        let walk = Walk::new(WalkConfig::new(3).with_mu(mu)).unwrap();
        let rho = walk.evolve().unwrap().states.pop().unwrap();
        let mut sum = ComplexMatrix::zeros(walk.dim());
        let branches = walk.trajectory_branches(3).unwrap();
        assert_eq!(branches.len(), 8);
        for b in &branches {
            sum = sum.add(b).unwrap();
        }
        assert!(sum.max_abs_diff(rho.matrix()).unwrap() < 1e-10);
    }
}

#[test]
fn noiseless_has_a_single_branch() {
    let walk = Walk::new(WalkConfig::new(4)).unwrap();
    let b = walk.trajectory_branches(4).unwrap();
    assert_eq!(b.len(), 1);
    let rho = walk.evolve().unwrap().states.pop().unwrap();
    assert!(b[0].max_abs_diff(rho.matrix()).unwrap() < 1e-14);
}

#[test]
fn damping_orientation_does_not_change_spread_pattern() {
    let a = final_distribution(WalkConfig::new(20).with_mu(0.3));
    let b = final_distribution(
        WalkConfig::new(20)
            .with_mu(0.3)
            .with_channel(ChannelSpec::AmplitudeDampingConventional),
    );
    assert!((a.total() - b.total()).abs() < 1e-12);
    assert!(a.std_dev() > 0.0 && b.std_dev() > 0.0);
}

#[test]
fn custom_coin_state_is_normalized() {
    let cfg = WalkConfig::new(3).with_coin([Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
    let d = final_distribution(cfg);
    assert!((d.total() - 1.0).abs() < 1e-12);
}
