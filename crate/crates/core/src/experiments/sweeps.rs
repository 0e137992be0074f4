//! Sweep runners behind the `delta-sweep`, `noise-sweep`, `relative-sweep`
//! and `distribution` subcommands.
//!
//! Every μ cell owns an independent walk and runs in parallel; rows are
//! assembled afterwards in config order so output is deterministic.

use rayon::prelude::*;

use super::config::{ExperimentConfig, Sweep};
use super::output::SweepResult;
use crate::error::{Error, Result};
use crate::measures::{lagged_phi, phi_relative, QuantumnessSeries};
use crate::walk::{position_distribution, ChannelSpec, Walk, WalkConfig};

pub const GENERATOR: &str = concat!("quantumness ", env!("CARGO_PKG_VERSION"));

fn metadata(cfg: &ExperimentConfig) -> Vec<String> {
    let mut lines = vec![format!("generator={GENERATOR}")];
    lines.extend(cfg.echo());
    lines.push(format!("seed={}", cfg.walk.seed));
    lines
}

fn walk_at(cfg: &WalkConfig, mu: f64) -> Result<Walk> {
    Walk::new(cfg.clone().with_mu(mu))
}

/// Φ_Δ over `times` for one lag, once per μ.
fn series_per_mu(walk: &WalkConfig, mus: &[f64], delta: usize, times: &[usize]) -> Result<Vec<QuantumnessSeries>> {
    mus.par_iter()
        .map(|&mu| {
            let mut s = lagged_phi(&walk_at(walk, mu)?, &[delta], times)?
                .pop()
                .expect("one lag requested");
            s.label = format!("mu={mu} delta={delta}");
            Ok(s)
        })
        .collect()
}

fn wrong_kind(expected: &str, cfg: &ExperimentConfig) -> Error {
    Error::Config(format!("expected a {expected} config, got {}", cfg.sweep.kind()))
}

/// Φ_Δ(t) at fixed t over a list of lags, one row per (μ, Δ). Metadata
/// records the maximizing lag for each μ (smallest lag on ties).
pub fn run_delta_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let Sweep::Delta { t, deltas, mus } = &cfg.sweep else {
        return Err(wrong_kind("delta_sweep", cfg));
    };
    cfg.validate()?;
    let per_mu: Vec<Vec<QuantumnessSeries>> = mus
        .par_iter()
        .map(|&mu| lagged_phi(&walk_at(&cfg.walk, mu)?, deltas, &[*t]))
        .collect::<Result<_>>()?;

    let mut meta = metadata(cfg);
    let mut result = SweepResult::new(&["delta", "mu", "phi"], Vec::new());
    for (&mu, series) in mus.iter().zip(&per_mu) {
        let mut best: Option<(usize, f64)> = None;
        for (&delta, s) in deltas.iter().zip(series) {
            let phi = s.value_at(*t).expect("every lag is at most t");
            result.push_row(&[Some(delta as f64), Some(mu), Some(phi)])?;
            if best.is_none_or(|(_, b)| phi > b) {
                best = Some((delta, phi));
            }
        }
        let (arg, max) = best.expect("nonempty lag list");
        meta.push(format!("mu={mu} argmax_delta={arg} max_phi={max}"));
    }
    result.metadata = meta;
    Ok(result)
}

fn time_range(t_min: usize, t_max: usize) -> Vec<usize> {
    (t_min..=t_max).collect()
}

/// Φ_Δ(t) over a time range, one row per (μ, t).
pub fn run_noise_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let Sweep::Noise { delta, t_min, t_max, mus } = &cfg.sweep else {
        return Err(wrong_kind("noise_sweep", cfg));
    };
    cfg.validate()?;
    let per_mu = series_per_mu(&cfg.walk, mus, *delta, &time_range(*t_min, *t_max))?;
    let mut result = SweepResult::new(&["t", "mu", "phi"], metadata(cfg));
    for (&mu, s) in mus.iter().zip(&per_mu) {
        for (t, phi) in s.iter() {
            result.push_row(&[Some(t as f64), Some(mu), Some(phi)])?;
        }
    }
    Ok(result)
}

/// As [`run_noise_sweep`] plus `phi_rel`, the ratio to the noiseless walk at
/// the same time. Undefined ratios are left empty.
pub fn run_relative_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let Sweep::Relative { delta, t_min, t_max, mus } = &cfg.sweep else {
        return Err(wrong_kind("relative_sweep", cfg));
    };
    cfg.validate()?;
    let times = time_range(*t_min, *t_max);
    let noiseless_walk = cfg.walk.clone().with_channel(ChannelSpec::Identity);
    let (reference, per_mu) = rayon::join(
        || series_per_mu(&noiseless_walk, &[0.0], *delta, &times),
        || series_per_mu(&cfg.walk, mus, *delta, &times),
    );
    let reference = reference?.pop().expect("one reference series");
    let per_mu = per_mu?;

    let mut result = SweepResult::new(&["t", "mu", "phi", "phi_rel"], metadata(cfg));
    for (&mu, s) in mus.iter().zip(&per_mu) {
        let rel = phi_relative(s, &reference)?;
        for (t, phi) in s.iter() {
            result.push_row(&[Some(t as f64), Some(mu), Some(phi), rel.value_at(t)])?;
        }
    }
    Ok(result)
}

fn distribution_rows(walk: &Walk, times: &[usize], result: &mut SweepResult) -> Result<()> {
    let mut wanted = times.iter().copied().peekable();
    for (t, state) in walk.states().enumerate() {
        let Some(&next) = wanted.peek() else { break };
        let state = state?;
        if t != next {
            continue;
        }
        wanted.next();
        let d = position_distribution(&state)?;
        for (x, &p) in d.positions().zip(&d.probabilities) {
            result.push_row(&[Some(t as f64), Some(x as f64), Some(p)])?;
        }
    }
    Ok(())
}

/// P(x) at each requested time for the walk at `walk.mu`.
pub fn run_distribution(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let Sweep::Distribution { times } = &cfg.sweep else {
        return Err(wrong_kind("distribution", cfg));
    };
    cfg.validate()?;
    let walk = Walk::new(cfg.walk.clone())?;
    let mut result = SweepResult::new(&["t", "x", "p"], metadata(cfg));
    distribution_rows(&walk, times, &mut result)?;
    Ok(result)
}

/// Final-time position distributions for each μ of a sweep, for
/// `output.emit_distributions`.
pub fn distribution_snapshots(cfg: &ExperimentConfig) -> Result<Vec<(f64, SweepResult)>> {
    let t_final = match &cfg.sweep {
        Sweep::Delta { t, .. } => *t,
        Sweep::Noise { t_max, .. } | Sweep::Relative { t_max, .. } => *t_max,
        Sweep::Distribution { .. } => return Ok(Vec::new()),
    };
    cfg.sweep
        .mus()
        .par_iter()
        .map(|&mu| {
            let mut meta = metadata(cfg);
            meta.push(format!("snapshot_mu={mu}"));
            let mut result = SweepResult::new(&["t", "x", "p"], meta);
            distribution_rows(&walk_at(&cfg.walk, mu)?, &[t_final], &mut result)?;
            Ok((mu, result))
        })
        .collect()
}

/// Dispatches on the configured sweep kind.
pub fn run(cfg: &ExperimentConfig) -> Result<SweepResult> {
    match cfg.sweep {
        Sweep::Delta { .. } => run_delta_sweep(cfg),
        Sweep::Noise { .. } => run_noise_sweep(cfg),
        Sweep::Relative { .. } => run_relative_sweep(cfg),
        Sweep::Distribution { .. } => run_distribution(cfg),
    }
}
