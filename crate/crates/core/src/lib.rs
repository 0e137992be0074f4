//! Commutator-based quantumness and a noisy discrete-time quantum walk.
//!
//! The measure Φ(ρ, σ) = 2‖[ρ, σ]‖²_HS is zero exactly when two states
//! commute and at most 1. The walk module evolves a Hadamard-type walk under
//! coin amplitude damping, and [`measures`] turns its trajectory into the
//! lagged, ensemble and relative quantumness series.

pub mod channels;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod op_algebra;
pub mod random;
pub mod states;
pub mod walk;

pub use channels::KrausChannel;
pub use error::{Error, Result};
pub use measures::{phi, QuantumnessSeries};
pub use op_algebra::ComplexMatrix;
pub use states::{DensityOperator, PureState};
pub use walk::{Walk, WalkConfig, WalkHistory};
