//! Parameter sweeps, their configuration and CSV output.

pub mod config;
pub mod output;
pub mod sweeps;
pub mod validate;

pub use config::{ExperimentConfig, RawConfig, Sweep, SweepKind, DEFAULT_MUS};
pub use output::{Column, SweepResult};
pub use sweeps::{
    distribution_snapshots, run, run_delta_sweep, run_distribution, run_noise_sweep, run_relative_sweep,
};
pub use validate::{run_invariant_suite, CheckOutcome};
