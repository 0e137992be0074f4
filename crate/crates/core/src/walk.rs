//! Discrete-time quantum walk on a line with a noisy coin.
//!
//! The joint space is coin ⊗ position with the coin as the slow index, so
//! basis index `c * L + p` holds coin `c` at lattice slot `p`, where
//! `p = x + half_width` and `L = 2 * half_width + 1`. The lattice is cyclic,
//! which keeps the shift exactly unitary; with `half_width >= steps` the
//! walker never reaches the seam.
//!
//! One step maps ρ to E(U ρ U†) with U = W (C ⊗ I). The fast path never forms
//! U: the coin acts as a 2×2 transform on each (p, q) coin block and W acts
//! as an index permutation, so a step costs O(N²).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::{self, amplitude_damping, amplitude_damping_conventional, identity_channel, KrausChannel};
use crate::error::{Error, Result};
use crate::op_algebra::{kron, ComplexMatrix, MAX_DIM, ZERO};
use crate::states::{DensityOperator, NORM_TOL};

/// Largest number of trajectory branches enumerated exactly.
pub const ENUMERATION_CAP: usize = 1 << 12;

/// Row-major 2×2 coin-space operator.
type Mat2 = [Complex64; 4];

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Identity,
    AmplitudeDamping,
    AmplitudeDampingConventional,
    /// Explicit coin Kraus operators, validated when the walk is built.
    Custom(Vec<ComplexMatrix>),
}

impl ChannelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelSpec::Identity => "identity",
            ChannelSpec::AmplitudeDamping => "amplitude_damping",
            ChannelSpec::AmplitudeDampingConventional => "amplitude_damping_conventional",
            ChannelSpec::Custom(_) => "custom",
        }
    }

    /// Parses the built-in names; `custom` needs operators and is handled by
    /// the config loader.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(ChannelSpec::Identity),
            "amplitude_damping" => Ok(ChannelSpec::AmplitudeDamping),
            "amplitude_damping_conventional" => Ok(ChannelSpec::AmplitudeDampingConventional),
            other => Err(Error::Config(format!("unknown channel '{other}'"))),
        }
    }

    pub fn build(&self, mu: f64) -> Result<KrausChannel> {
        match self {
            ChannelSpec::Identity => Ok(identity_channel(2)),
            ChannelSpec::AmplitudeDamping => amplitude_damping(mu),
            ChannelSpec::AmplitudeDampingConventional => amplitude_damping_conventional(mu),
            ChannelSpec::Custom(ops) => KrausChannel::new(ops.clone(), "custom", BTreeMap::new()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub steps: usize,
    /// Coin angle α in radians.
    pub alpha: f64,
    /// Noise strength μ ∈ [0, 1].
    pub mu: f64,
    /// Lag Δ in steps.
    pub delta: usize,
    pub coin_init: [Complex64; 2],
    pub lattice_half_width: usize,
    pub channel: ChannelSpec,
    pub seed: u64,
}

impl WalkConfig {
    /// Hadamard coin, noiseless, Δ = 2, coin (|0⟩ + i|1⟩)/√2 and the
    /// smallest lattice that contains `steps` steps.
    pub fn new(steps: usize) -> Self {
        Self {
            steps,
            alpha: FRAC_PI_4,
            mu: 0.0,
            delta: 2,
            coin_init: [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, FRAC_1_SQRT_2)],
            lattice_half_width: steps.max(1),
            channel: ChannelSpec::AmplitudeDamping,
            seed: 0,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_coin(mut self, coin: [Complex64; 2]) -> Self {
        self.coin_init = coin;
        self
    }

    pub fn with_half_width(mut self, half_width: usize) -> Self {
        self.lattice_half_width = half_width;
        self
    }

    pub fn with_channel(mut self, channel: ChannelSpec) -> Self {
        self.channel = channel;
        self
    }

    pub fn sites(&self) -> usize {
        2 * self.lattice_half_width + 1
    }

    pub fn dim(&self) -> usize {
        2 * self.sites()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lattice_half_width < 1 {
            return Err(Error::invalid("lattice half width must be at least 1"));
        }
        if self.lattice_half_width < self.steps {
            return Err(Error::invalid(format!(
                "lattice half width {} is smaller than steps {}",
                self.lattice_half_width, self.steps
            )));
        }
        if !self.alpha.is_finite() {
            return Err(Error::invalid("coin angle must be finite"));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::invalid(format!("mu={} outside [0, 1]", self.mu)));
        }
        let norm_sq = self.coin_init[0].norm_sqr() + self.coin_init[1].norm_sqr();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "initial coin has squared norm {norm_sq}, expected 1"
            )));
        }
        if self.dim() > MAX_DIM {
            return Err(Error::Resource(format!(
                "walk dimension {} exceeds maximum {MAX_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self::new(100)
    }
}

/// [[cos α, sin α], [sin α, −cos α]]
pub fn coin_operator(alpha: f64) -> ComplexMatrix {
    let (s, c) = alpha.sin_cos();
    ComplexMatrix::from_raw(
        2,
        vec![
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-c, 0.0),
        ],
    )
}

/// The conditional shift in both dense and permutation form.
#[derive(Debug, Clone)]
pub struct ShiftOperator {
    pub dense: ComplexMatrix,
    /// `permutation[i]` is the image of basis index `i`.
    pub permutation: Vec<usize>,
}

fn shift_permutation(half_width: usize) -> Vec<usize> {
    let sites = 2 * half_width + 1;
    (0..2 * sites)
        .map(|i| {
            let (coin, p) = (i / sites, i % sites);
            let moved = if coin == 0 { (p + sites - 1) % sites } else { (p + 1) % sites };
            coin * sites + moved
        })
        .collect()
}

pub fn shift_operator(half_width: usize) -> Result<ShiftOperator> {
    if half_width < 1 {
        return Err(Error::invalid("lattice half width must be at least 1"));
    }
    let permutation = shift_permutation(half_width);
    let n = permutation.len();
    if n > MAX_DIM {
        return Err(Error::Resource(format!("shift dimension {n} exceeds maximum {MAX_DIM}")));
    }
    let mut dense = ComplexMatrix::zeros(n);
    for (from, &to) in permutation.iter().enumerate() {
        dense.set(to, from, Complex64::new(1.0, 0.0));
    }
    Ok(ShiftOperator { dense, permutation })
}

impl ShiftOperator {
    /// W ρ W† by relabeling rows and columns.
    pub fn conjugate_permuted(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.permutation.len() {
            return Err(Error::DimensionMismatch {
                left: self.permutation.len(),
                right: rho.dim(),
            });
        }
        Ok(permute(rho, &self.permutation))
    }

    pub fn conjugate_dense(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dense.matmul(rho)?.matmul(&self.dense.adjoint())
    }
}

fn permute(rho: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    let n = rho.dim();
    let mut out = vec![ZERO; n * n];
    for (i, &pi) in perm.iter().enumerate() {
        let src = rho.row(i);
        let dst = &mut out[pi * n..(pi + 1) * n];
        for (j, &pj) in perm.iter().enumerate() {
            dst[pj] = src[j];
        }
    }
    ComplexMatrix::from_raw(n, out)
}

fn to_mat2(m: &ComplexMatrix) -> Mat2 {
    [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)]
}

/// Σ_k (A_k ⊗ I) ρ (A_k ⊗ I)† evaluated block-wise.
fn conjugate_coin(rho: &ComplexMatrix, sites: usize, ops: &[Mat2]) -> ComplexMatrix {
    let n = rho.dim();
    let src = rho.as_slice();
    let mut out = vec![ZERO; n * n];
    for p in 0..sites {
        for q in 0..sites {
            let idx = [
                p * n + q,
                p * n + sites + q,
                (sites + p) * n + q,
                (sites + p) * n + sites + q,
            ];
            let m = [src[idx[0]], src[idx[1]], src[idx[2]], src[idx[3]]];
            if m.iter().all(|&z| z == ZERO) {
                continue;
            }
            let mut acc = [ZERO; 4];
            for a in ops {
                // a · m
                let am = [
                    a[0] * m[0] + a[1] * m[2],
                    a[0] * m[1] + a[1] * m[3],
                    a[2] * m[0] + a[3] * m[2],
                    a[2] * m[1] + a[3] * m[3],
                ];
                // (a · m) · a†
                acc[0] += am[0] * a[0].conj() + am[1] * a[1].conj();
                acc[1] += am[0] * a[2].conj() + am[1] * a[3].conj();
                acc[2] += am[2] * a[0].conj() + am[3] * a[1].conj();
                acc[3] += am[2] * a[2].conj() + am[3] * a[3].conj();
            }
            for (k, &i) in idx.iter().enumerate() {
                out[i] = acc[k];
            }
        }
    }
    ComplexMatrix::from_raw(n, out)
}

/// A configured walk: the coin, the noise channel and the shift permutation.
#[derive(Debug, Clone)]
pub struct Walk {
    config: WalkConfig,
    sites: usize,
    coin: Mat2,
    channel: KrausChannel,
    kraus: Vec<Mat2>,
    permutation: Vec<usize>,
}

impl Walk {
    pub fn new(config: WalkConfig) -> Result<Self> {
        config.validate()?;
        let channel = config.channel.build(config.mu)?;
        if channel.dim() != 2 {
            return Err(Error::invalid(format!(
                "coin channel must act on dimension 2, got {}",
                channel.dim()
            )));
        }
        let kraus = channel.operators().iter().map(to_mat2).collect();
        Ok(Self {
            sites: config.sites(),
            coin: to_mat2(&coin_operator(config.alpha)),
            permutation: shift_permutation(config.lattice_half_width),
            channel,
            kraus,
            config,
        })
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    pub fn dim(&self) -> usize {
        2 * self.sites
    }

    /// (coin_init ⊗ |x = 0⟩)(h.c.)
    pub fn initial_state(&self) -> Result<DensityOperator> {
        let mut psi = vec![ZERO; self.dim()];
        let origin = self.config.lattice_half_width;
        psi[origin] = self.config.coin_init[0];
        psi[self.sites + origin] = self.config.coin_init[1];
        DensityOperator::new(ComplexMatrix::outer(&psi, &psi)?)
    }

    fn check_dim(&self, rho: &ComplexMatrix) -> Result<()> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rho.dim(),
            });
        }
        Ok(())
    }

    /// U ρ U† on a raw (possibly unnormalized) matrix.
    pub fn unitary_part(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho)?;
        let coined = conjugate_coin(rho, self.sites, std::slice::from_ref(&self.coin));
        Ok(permute(&coined, &self.permutation))
    }

    /// Per-Kraus branches (A_k ⊗ I) ρ (A_k ⊗ I)†.
    pub fn noise_branches(&self, rho: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
        self.check_dim(rho)?;
        Ok(self
            .kraus
            .iter()
            .map(|a| conjugate_coin(rho, self.sites, std::slice::from_ref(a)))
            .collect())
    }

    /// E(U ρ U†) on a raw matrix.
    pub fn step_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let moved = self.unitary_part(rho)?;
        Ok(conjugate_coin(&moved, self.sites, &self.kraus))
    }

    pub fn step(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.step_matrix(rho.matrix())?)
    }

    /// U = W (C ⊗ I) as a dense matrix.
    pub fn unitary_dense(&self) -> Result<ComplexMatrix> {
        let shift = shift_operator(self.config.lattice_half_width)?;
        let coin = coin_operator(self.config.alpha);
        shift.dense.matmul(&kron(&coin, &ComplexMatrix::identity(self.sites))?)
    }

    /// Same map as [`Walk::step`] through dense products and the lifted
    /// channel. Cross-check path only.
    pub fn step_dense(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let u = self.unitary_dense()?;
        let moved = DensityOperator::new(u.matmul(rho.matrix())?.matmul(&u.adjoint())?)?;
        channels::apply(&channels::lift_to_walk(&self.channel, self.sites)?, &moved)
    }

    /// Lazily yields ρ(0), ρ(1), …, ρ(steps).
    pub fn states(&self) -> Evolution<'_> {
        Evolution {
            walk: self,
            next: None,
            t: 0,
            failed: false,
        }
    }

    pub fn evolve(&self) -> Result<WalkHistory> {
        let states = self.states().collect::<Result<Vec<_>>>()?;
        Ok(WalkHistory {
            states,
            config: self.config.clone(),
        })
    }

    /// Every unnormalized branch A_{j_t}U⋯A_{j_1}U ρ₀ U†A†_{j_1}⋯U†A†_{j_t},
    /// ordered lexicographically in (j_1, …, j_t) with j_1 slowest.
    pub fn trajectory_branches(&self, t: usize) -> Result<Vec<ComplexMatrix>> {
        let k = self.kraus.len();
        let count = (k as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
        if count > ENUMERATION_CAP as u128 {
            return Err(Error::Resource(format!(
                "{k}^{t} trajectory branches exceed the enumeration cap of {ENUMERATION_CAP}; \
                 use the sampled estimator instead"
            )));
        }
        if t > self.config.lattice_half_width {
            return Err(Error::invalid(format!(
                "t={t} exceeds lattice half width {}",
                self.config.lattice_half_width
            )));
        }
        let mut branches = vec![self.initial_state()?.into_matrix()];
        for _ in 0..t {
            branches = branches
                .par_iter()
                .map(|b| {
                    let moved = self.unitary_part(b)?;
                    self.noise_branches(&moved)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
        }
        Ok(branches)
    }
}

pub struct Evolution<'a> {
    walk: &'a Walk,
    next: Option<DensityOperator>,
    t: usize,
    failed: bool,
}

impl Iterator for Evolution<'_> {
    type Item = Result<DensityOperator>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.t > self.walk.config.steps {
            return None;
        }
        let state = match self.next.take() {
            None => self.walk.initial_state(),
            Some(prev) => self.walk.step(&prev),
        };
        self.t += 1;
        match &state {
            Ok(s) => self.next = Some(s.clone()),
            Err(_) => self.failed = true,
        }
        Some(state)
    }
}

#[derive(Debug, Clone)]
pub struct WalkHistory {
    pub states: Vec<DensityOperator>,
    pub config: WalkConfig,
}

impl WalkHistory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn distribution(&self, t: usize) -> Result<PositionDistribution> {
        let rho = self
            .states
            .get(t)
            .ok_or_else(|| Error::invalid(format!("no state at t={t}")))?;
        let mut d = position_distribution(rho)?;
        d.time = Some(t);
        Ok(d)
    }
}

/// P(x) over x ∈ [−half_width, half_width].
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub half_width: usize,
    pub probabilities: Vec<f64>,
    pub time: Option<usize>,
}

impl PositionDistribution {
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        let h = self.half_width as i64;
        (-h..=h).take(self.probabilities.len())
    }

    pub fn prob(&self, x: i64) -> f64 {
        let slot = x + self.half_width as i64;
        if slot < 0 {
            return 0.0;
        }
        self.probabilities.get(slot as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    fn central_moment(&self, order: i32) -> f64 {
        let mean = self.mean();
        self.positions()
            .zip(&self.probabilities)
            .map(|(x, p)| p * (x as f64 - mean).powi(order))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.positions().zip(&self.probabilities).map(|(x, p)| x as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        self.central_moment(2)
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Fourth standardized moment; 3 for a Gaussian.
    pub fn kurtosis(&self) -> f64 {
        self.central_moment(4) / self.variance().powi(2)
    }
}

/// P(x) = Σ_c ⟨c, x|ρ|c, x⟩.
pub fn position_distribution(rho: &DensityOperator) -> Result<PositionDistribution> {
    let n = rho.dim();
    if n % 2 != 0 || (n / 2) % 2 != 1 {
        return Err(Error::invalid(format!(
            "dimension {n} is not 2·(2T+1) for a coin ⊗ lattice space"
        )));
    }
    let sites = n / 2;
    let m = rho.matrix();
    let probabilities = (0..sites)
        .map(|p| (m.get(p, p).re + m.get(sites + p, sites + p).re).max(0.0))
        .collect();
    Ok(PositionDistribution {
        half_width: (sites - 1) / 2,
        probabilities,
        time: None,
    })
}

pub fn initial_state(config: &WalkConfig) -> Result<DensityOperator> {
    Walk::new(config.clone())?.initial_state()
}

pub fn step(rho: &DensityOperator, config: &WalkConfig) -> Result<DensityOperator> {
    Walk::new(config.clone())?.step(rho)
}

pub fn evolve(config: &WalkConfig) -> Result<WalkHistory> {
    Walk::new(config.clone())?.evolve()
}

pub fn trajectory_branches(config: &WalkConfig, t: usize) -> Result<Vec<ComplexMatrix>> {
    Walk::new(config.clone())?.trajectory_branches(t)
}
