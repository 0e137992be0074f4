//! Commutator-based quantumness Φ(ρ, σ) = 2‖[ρ, σ]‖²_HS and the derived
//! walk measures: the lagged series Φ_Δ, the trajectory-ensemble sum Φ_av
//! and the noiseless-normalized ratio Φ_rel.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::op_algebra::{commutator, ComplexMatrix};
use crate::states::DensityOperator;
use crate::walk::{Walk, WalkConfig, WalkHistory};

/// Denominators at or below this are treated as zero by [`phi_relative`].
pub const RELATIVE_FLOOR: f64 = 1e-12;

/// Φ on raw matrices, for unnormalized trajectory branches.
pub fn phi_matrices(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(2.0 * commutator(a, b)?.hs_norm_sq())
}

pub fn phi(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    phi_matrices(rho.matrix(), sigma.matrix())
}

/// Closed form sin²(2θ) for the pure pair |0⟩, cos θ|0⟩ + sin θ|1⟩.
pub fn phi_pure_analytic(theta: f64) -> f64 {
    (2.0 * theta).sin().powi(2)
}

/// 4(d − 1)/d² for one vector from each of two mutually unbiased bases.
pub fn phi_mub_analytic(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::invalid(format!("MUB value needs d >= 2, got {d}")));
    }
    let d = d as f64;
    Ok(4.0 * (d - 1.0) / (d * d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumnessSeries {
    pub times: Vec<usize>,
    pub values: Vec<f64>,
    pub label: String,
}

impl QuantumnessSeries {
    pub fn new(times: Vec<usize>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} times for {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("series times must be strictly increasing"));
        }
        Ok(Self {
            times,
            values,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn value_at(&self, t: usize) -> Option<f64> {
        self.times.binary_search(&t).ok().map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }
}

/// Φ(ρ(t), ρ(t − Δ)) for t = Δ, …, t_max.
pub fn phi_delta_series(history: &WalkHistory, delta: usize) -> Result<QuantumnessSeries> {
    if delta >= history.len() {
        return Err(Error::invalid(format!(
            "lag {delta} needs more than {} recorded states",
            history.len()
        )));
    }
    let times: Vec<usize> = (delta..history.len()).collect();
    let values = times
        .par_iter()
        .map(|&t| phi(&history.states[t], &history.states[t - delta]))
        .collect::<Result<Vec<_>>>()?;
    QuantumnessSeries::new(times, values, format!("delta={delta}"))
}

/// Streams the walk once and evaluates Φ_Δ(t) for every requested lag at
/// every requested time, keeping only the last `max(deltas) + 1` states in
/// memory. Returns one series per lag, in the order given; times earlier than
/// a lag are skipped for that lag.
pub fn lagged_phi(walk: &Walk, deltas: &[usize], times: &[usize]) -> Result<Vec<QuantumnessSeries>> {
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("evaluation times must be strictly increasing"));
    }
    let t_end = match times.last() {
        Some(&t) => t,
        None => return deltas.iter().map(|d| QuantumnessSeries::new(vec![], vec![], format!("delta={d}"))).collect(),
    };
    if t_end > walk.config().steps {
        return Err(Error::invalid(format!(
            "evaluation time {t_end} exceeds walk steps {}",
            walk.config().steps
        )));
    }
    let window = deltas.iter().copied().max().unwrap_or(0) + 1;
    let mut recent: VecDeque<DensityOperator> = VecDeque::with_capacity(window);
    let mut series: Vec<(Vec<usize>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); deltas.len()];
    let mut wanted = times.iter().copied().peekable();

    for (t, state) in walk.states().enumerate().take(t_end + 1) {
        if recent.len() == window {
            recent.pop_front();
        }
        recent.push_back(state?);
        if wanted.peek() != Some(&t) {
            continue;
        }
        wanted.next();
        let current = recent.back().expect("just pushed");
        let values: Vec<Option<f64>> = deltas
            .par_iter()
            .map(|&d| {
                if d > t {
                    return Ok(None);
                }
                let past = &recent[recent.len() - 1 - d];
                phi(current, past).map(Some)
            })
            .collect::<Result<_>>()?;
        for ((ts, vs), v) in series.iter_mut().zip(values) {
            if let Some(v) = v {
                ts.push(t);
                vs.push(v);
            }
        }
    }
    series
        .into_iter()
        .zip(deltas)
        .map(|((ts, vs), d)| QuantumnessSeries::new(ts, vs, format!("delta={d}")))
        .collect()
}

/// How trajectory pairs enter Φ_av.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairWeighting {
    /// Φ of the weight-carrying branch matrices, as they come out of the
    /// Kraus expansion. Weights enter quadratically through the norm.
    #[default]
    Unnormalized,
    /// Σ p_J p_J' Φ(ρ̂_J, ρ̂_J') with ρ̂ the normalized branch.
    ProbabilityWeighted,
}

/// Exact Φ_av(t): Φ summed over all ordered pairs of trajectory branches.
pub fn phi_av(config: &WalkConfig, t: usize) -> Result<f64> {
    phi_av_with(config, t, PairWeighting::Unnormalized)
}

pub fn phi_av_with(config: &WalkConfig, t: usize, weighting: PairWeighting) -> Result<f64> {
    let branches = Walk::new(config.clone())?.trajectory_branches(t)?;
    let weights: Vec<f64> = branches.iter().map(|b| b.trace().re).collect();
    let rows = (0..branches.len())
        .into_par_iter()
        .map(|i| {
            let mut row = 0.0;
            for j in i + 1..branches.len() {
                let raw = phi_matrices(&branches[i], &branches[j])?;
                row += match weighting {
                    PairWeighting::Unnormalized => raw,
                    PairWeighting::ProbabilityWeighted => {
                        let w = weights[i] * weights[j];
                        if w > 0.0 {
                            raw / w
                        } else {
                            0.0
                        }
                    }
                };
            }
            Ok(row)
        })
        .collect::<Result<Vec<f64>>>()?;
    // diagonal pairs vanish; off-diagonal pairs appear in both orders
    Ok(2.0 * rows.iter().sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Draws one trajectory, picking each Kraus branch with its conditional
/// probability. Returns the trajectory probability and the normalized state.
fn sample_trajectory(walk: &Walk, t: usize, rng: &mut impl Rng) -> Result<(f64, ComplexMatrix)> {
    let mut state = walk.initial_state()?.into_matrix();
    let mut weight = 1.0;
    for _ in 0..t {
        let moved = walk.unitary_part(&state)?;
        let branches = walk.noise_branches(&moved)?;
        let probs: Vec<f64> = branches.iter().map(|b| b.trace().re.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = probs.len() - 1;
        for (k, &p) in probs.iter().enumerate() {
            if u < p {
                pick = k;
                break;
            }
            u -= p;
        }
        let p = probs[pick] / total;
        weight *= p;
        state = branches[pick].scale_real(1.0 / probs[pick]);
    }
    Ok((weight, state))
}

/// Monte Carlo estimate of Φ_av(t). Pairs of trajectories are drawn
/// independently with probability equal to their branch weight and each
/// pair is reweighted so the estimator is unbiased for the exact double sum.
pub fn phi_av_sampled(config: &WalkConfig, t: usize, n_samples: usize, seed: u64) -> Result<SampledEstimate> {
    phi_av_sampled_with(config, t, n_samples, seed, PairWeighting::Unnormalized)
}

pub fn phi_av_sampled_with(
    config: &WalkConfig,
    t: usize,
    n_samples: usize,
    seed: u64,
    weighting: PairWeighting,
) -> Result<SampledEstimate> {
    if n_samples < 2 {
        return Err(Error::invalid("sampled estimate needs at least 2 samples"));
    }
    let walk = Walk::new(config.clone())?;
    if t > config.lattice_half_width {
        return Err(Error::invalid(format!(
            "t={t} exceeds lattice half width {}",
            config.lattice_half_width
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let (w1, s1) = sample_trajectory(&walk, t, &mut rng)?;
        let (w2, s2) = sample_trajectory(&walk, t, &mut rng)?;
        let raw = phi_matrices(&s1, &s2)?;
        values.push(match weighting {
            PairWeighting::Unnormalized => w1 * w2 * raw,
            PairWeighting::ProbabilityWeighted => raw,
        });
    }
    let n = n_samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(SampledEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
        samples: n_samples,
    })
}

/// Pointwise noisy / noiseless ratio. Times whose noiseless value is at or
/// below [`RELATIVE_FLOOR`] are left out of the result.
pub fn phi_relative(noisy: &QuantumnessSeries, noiseless: &QuantumnessSeries) -> Result<QuantumnessSeries> {
    if noisy.times != noiseless.times {
        return Err(Error::invalid("relative quantumness needs matching time grids"));
    }
    let (times, values): (Vec<usize>, Vec<f64>) = noisy
        .iter()
        .zip(&noiseless.values)
        .filter(|(_, &den)| den > RELATIVE_FLOOR)
        .map(|((t, num), &den)| (t, num / den))
        .unzip();
    QuantumnessSeries::new(times, values, format!("{} relative", noisy.label))
}
