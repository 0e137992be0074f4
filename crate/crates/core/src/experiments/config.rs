//! Flat `section.key=value` experiment configuration.
//!
//! ```text
//! # lag-two noise sweep
//! walk.steps=100
//! walk.alpha=0.7853981633974483
//! walk.channel=amplitude_damping
//! sweep.mus=0,0.05,0.1,0.2
//! sweep.delta=2
//! ```
//!
//! Lists are comma separated; integer lists also accept an inclusive range
//! `a..b`. Complex numbers are written `re,im` and coin vectors `re,im;re,im`.
//! A custom coin channel is given as `walk.channel=custom` plus one
//! `channel.kraus.<k>` entry per operator holding its row-major entries as
//! `re,im` pairs separated by `;`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::op_algebra::ComplexMatrix;
use crate::walk::{ChannelSpec, WalkConfig};

pub const DEFAULT_MUS: [f64; 4] = [0.0, 0.05, 0.1, 0.2];
pub const DEFAULT_MAX_DELTA: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Delta,
    Noise,
    Relative,
    Distribution,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Delta => "delta_sweep",
            SweepKind::Noise => "noise_sweep",
            SweepKind::Relative => "relative_sweep",
            SweepKind::Distribution => "distribution",
        }
    }
}

impl FromStr for SweepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_sweep" => Ok(SweepKind::Delta),
            "noise_sweep" => Ok(SweepKind::Noise),
            "relative_sweep" => Ok(SweepKind::Relative),
            "distribution" => Ok(SweepKind::Distribution),
            other => Err(Error::Config(format!("unknown sweep kind '{other}'"))),
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Φ_Δ(t) at a fixed t over a list of lags.
    Delta { t: usize, deltas: Vec<usize>, mus: Vec<f64> },
    /// Φ_Δ(t) over a time range at a fixed lag.
    Noise { delta: usize, t_min: usize, t_max: usize, mus: Vec<f64> },
    /// As `Noise`, plus the ratio to the noiseless series.
    Relative { delta: usize, t_min: usize, t_max: usize, mus: Vec<f64> },
    /// Position distributions of the walk at `walk.mu`.
    Distribution { times: Vec<usize> },
}

impl Sweep {
    pub fn kind(&self) -> SweepKind {
        match self {
            Sweep::Delta { .. } => SweepKind::Delta,
            Sweep::Noise { .. } => SweepKind::Noise,
            Sweep::Relative { .. } => SweepKind::Relative,
            Sweep::Distribution { .. } => SweepKind::Distribution,
        }
    }

    pub fn mus(&self) -> &[f64] {
        match self {
            Sweep::Delta { mus, .. } | Sweep::Noise { mus, .. } | Sweep::Relative { mus, .. } => mus,
            Sweep::Distribution { .. } => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub walk: WalkConfig,
    pub sweep: Sweep,
    pub output_path: Option<PathBuf>,
    pub emit_distributions: bool,
}

/// Raw key/value pairs, in key order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "walk.steps",
    "walk.alpha",
    "walk.mu",
    "walk.delta",
    "walk.coin_init",
    "walk.lattice_half_width",
    "walk.channel",
    "walk.seed",
    "sweep.kind",
    "sweep.t",
    "sweep.deltas",
    "sweep.delta",
    "sweep.mus",
    "sweep.t_min",
    "sweep.t_max",
    "sweep.times",
    "output.path",
    "output.emit_distributions",
];

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim();
            if raw.entries.contains_key(key) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            raw.insert(key, value.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets or replaces a key, rejecting unknown ones.
    pub fn insert(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let known = KNOWN_KEYS.contains(&key)
            || key
                .strip_prefix("channel.kraus.")
                .is_some_and(|k| k.parse::<usize>().is_ok());
        if !known {
            return Err(Error::Config(format!("unknown config key '{key}'")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
            })
            .transpose()
    }

    /// Resolves every default and checks the result.
    pub fn build(&self, kind: SweepKind) -> Result<ExperimentConfig> {
        if let Some(k) = self.get("sweep.kind") {
            let declared: SweepKind = k.parse()?;
            if declared != kind {
                return Err(Error::Config(format!(
                    "config declares sweep.kind={declared} but {kind} was requested"
                )));
            }
        }
        let walk = self.walk_config()?;
        let sweep = self.sweep(kind, &walk)?;
        let cfg = ExperimentConfig {
            walk,
            sweep,
            output_path: self.get("output.path").map(PathBuf::from),
            emit_distributions: self.parsed("output.emit_distributions")?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn walk_config(&self) -> Result<WalkConfig> {
        let steps: usize = self.parsed("walk.steps")?.unwrap_or(100);
        let mut w = WalkConfig::new(steps);
        if let Some(a) = self.parsed("walk.alpha")? {
            w.alpha = a;
        }
        if let Some(m) = self.parsed("walk.mu")? {
            w.mu = m;
        }
        if let Some(d) = self.parsed("walk.delta")? {
            w.delta = d;
        }
        if let Some(h) = self.parsed("walk.lattice_half_width")? {
            w.lattice_half_width = h;
        }
        if let Some(s) = self.parsed("walk.seed")? {
            w.seed = s;
        }
        if let Some(c) = self.get("walk.coin_init") {
            let v = parse_complex_list(c, "walk.coin_init")?;
            if v.len() != 2 {
                return Err(Error::Config("walk.coin_init needs two amplitudes".into()));
            }
            w.coin_init = [v[0], v[1]];
        }
        w.channel = match self.get("walk.channel").unwrap_or("amplitude_damping") {
            "custom" => ChannelSpec::Custom(self.custom_operators()?),
            name => ChannelSpec::from_name(name)?,
        };
        Ok(w)
    }

    fn custom_operators(&self) -> Result<Vec<ComplexMatrix>> {
        let mut ops: Vec<(usize, ComplexMatrix)> = Vec::new();
        for (key, value) in self.entries() {
            let Some(index) = key.strip_prefix("channel.kraus.") else {
                continue;
            };
            let index: usize = index.parse().expect("checked on insert");
            let entries = parse_complex_list(value, key)?;
            let dim = (entries.len() as f64).sqrt().round() as usize;
            if dim * dim != entries.len() {
                return Err(Error::Config(format!("{key}: {} entries is not a square", entries.len())));
            }
            ops.push((index, ComplexMatrix::from_vec(dim, entries)?));
        }
        if ops.is_empty() {
            return Err(Error::Config("walk.channel=custom needs channel.kraus.<k> entries".into()));
        }
        ops.sort_by_key(|(k, _)| *k);
        Ok(ops.into_iter().map(|(_, m)| m).collect())
    }

    fn sweep(&self, kind: SweepKind, walk: &WalkConfig) -> Result<Sweep> {
        let mus = match self.get("sweep.mus") {
            Some(v) => parse_f64_list(v, "sweep.mus")?,
            None => DEFAULT_MUS.to_vec(),
        };
        let delta: usize = self.parsed("sweep.delta")?.unwrap_or(walk.delta);
        let t_max: usize = self.parsed("sweep.t_max")?.unwrap_or(walk.steps);
        let t_min: usize = self.parsed("sweep.t_min")?.unwrap_or(delta);
        Ok(match kind {
            SweepKind::Delta => Sweep::Delta {
                t: self.parsed("sweep.t")?.unwrap_or(walk.steps),
                deltas: match self.get("sweep.deltas") {
                    Some(v) => parse_usize_list(v, "sweep.deltas")?,
                    None => (0..=DEFAULT_MAX_DELTA).collect(),
                },
                mus,
            },
            SweepKind::Noise => Sweep::Noise { delta, t_min, t_max, mus },
            SweepKind::Relative => Sweep::Relative { delta, t_min, t_max, mus },
            SweepKind::Distribution => Sweep::Distribution {
                times: match self.get("sweep.times") {
                    Some(v) => parse_usize_list(v, "sweep.times")?,
                    None => vec![walk.steps],
                },
            },
        })
    }
}

impl ExperimentConfig {
    pub fn from_text(text: &str, kind: SweepKind) -> Result<Self> {
        RawConfig::parse(text)?.build(kind)
    }

    pub fn validate(&self) -> Result<()> {
        self.walk.validate()?;
        let steps = self.walk.steps;
        let check_mus = |mus: &[f64]| -> Result<()> {
            if mus.is_empty() {
                return Err(Error::Config("sweep.mus must not be empty".into()));
            }
            match mus.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                Some(m) => Err(Error::Config(format!("mu={m} outside [0, 1]"))),
                None => Ok(()),
            }
        };
        match &self.sweep {
            Sweep::Delta { t, deltas, mus } => {
                check_mus(mus)?;
                if *t > steps {
                    return Err(Error::Config(format!("sweep.t={t} exceeds walk.steps={steps}")));
                }
                if deltas.is_empty() {
                    return Err(Error::Config("sweep.deltas must not be empty".into()));
                }
                if let Some(d) = deltas.iter().find(|&&d| d > *t) {
                    return Err(Error::Config(format!("lag {d} exceeds sweep.t={t}")));
                }
            }
            Sweep::Noise { delta, t_min, t_max, mus } | Sweep::Relative { delta, t_min, t_max, mus } => {
                check_mus(mus)?;
                if t_max > &steps {
                    return Err(Error::Config(format!("sweep.t_max={t_max} exceeds walk.steps={steps}")));
                }
                if t_min > t_max {
                    return Err(Error::Config(format!("sweep.t_min={t_min} exceeds sweep.t_max={t_max}")));
                }
                if t_min < delta {
                    return Err(Error::Config(format!("sweep.t_min={t_min} is below the lag {delta}")));
                }
            }
            Sweep::Distribution { times } => {
                if times.is_empty() {
                    return Err(Error::Config("sweep.times must not be empty".into()));
                }
                if times.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config("sweep.times must be strictly increasing".into()));
                }
                if let Some(t) = times.iter().find(|&&t| t > steps) {
                    return Err(Error::Config(format!("time {t} exceeds walk.steps={steps}")));
                }
            }
        }
        Ok(())
    }

    /// Effective settings as sorted `key=value` strings, echoed into output
    /// metadata.
    pub fn echo(&self) -> Vec<String> {
        let w = &self.walk;
        let mut lines = vec![
            format!("walk.steps={}", w.steps),
            format!("walk.alpha={}", w.alpha),
            format!("walk.mu={}", w.mu),
            format!("walk.delta={}", w.delta),
            format!(
                "walk.coin_init={},{};{},{}",
                w.coin_init[0].re, w.coin_init[0].im, w.coin_init[1].re, w.coin_init[1].im
            ),
            format!("walk.lattice_half_width={}", w.lattice_half_width),
            format!("walk.channel={}", w.channel.name()),
            format!("walk.seed={}", w.seed),
            format!("sweep.kind={}", self.sweep.kind()),
        ];
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let join_u = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match &self.sweep {
            Sweep::Delta { t, deltas, mus } => {
                lines.push(format!("sweep.t={t}"));
                lines.push(format!("sweep.deltas={}", join_u(deltas)));
                lines.push(format!("sweep.mus={}", join(mus)));
            }
            Sweep::Noise { delta, t_min, t_max, mus } | Sweep::Relative { delta, t_min, t_max, mus } => {
                lines.push(format!("sweep.delta={delta}"));
                lines.push(format!("sweep.t_min={t_min}"));
                lines.push(format!("sweep.t_max={t_max}"));
                lines.push(format!("sweep.mus={}", join(mus)));
            }
            Sweep::Distribution { times } => lines.push(format!("sweep.times={}", join_u(times))),
        }
        if let ChannelSpec::Custom(ops) = &w.channel {
            for (k, op) in ops.iter().enumerate() {
                let entries: Vec<String> = op.as_slice().iter().map(|z| format!("{},{}", z.re, z.im)).collect();
                lines.push(format!("channel.kraus.{k}={}", entries.join(";")));
            }
        }
        lines
    }
}

fn parse_f64_list(s: &str, key: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse '{p}'")))
        })
        .collect()
}

fn parse_usize_list(s: &str, key: &str) -> Result<Vec<usize>> {
    let bad = |p: &str| Error::Config(format!("{key}: cannot parse '{p}'"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad(part))?;
            let b: usize = b.trim().parse().map_err(|_| bad(part))?;
            if a > b {
                return Err(bad(part));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    Ok(out)
}

/// `re,im;re,im;...`
fn parse_complex_list(s: &str, key: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .map(|pair| {
            let nums = parse_f64_list(pair, key)?;
            match nums[..] {
                [re, im] => Ok(Complex64::new(re, im)),
                _ => Err(Error::Config(format!("{key}: expected 're,im' but got '{pair}'"))),
            }
        })
        .collect()
}
