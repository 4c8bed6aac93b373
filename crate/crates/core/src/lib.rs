//! Simulation and tail diagnostics for stochastic integrals driven by
//! regularly varying Lévy processes.
//!
//! The crate is organised around a few pieces:
//!
//! * [`regvar`]: the limit measures `μ`, `m` and `m*` and the normalizing sequence.
//! * [`cadlag`]: path representation, functionals and the J1 distance.
//! * [`levy_sim`]: Lévy paths, integrands and the stochastic integral.
//! * [`diagnostics`]: Monte Carlo estimators for tails, ratios and auxiliary bounds.
//! * [`cli`]: config-driven experiment runner.

pub mod cadlag;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod laws;
pub mod levy_sim;
pub mod mc;
pub mod regvar;
pub mod rng;

pub use cadlag::{j1_distance, CadlagPath, Continuity, Jump, TimeChange};
pub use error::{Error, Result};
pub use levy_sim::{IntegrandSpec, LevyModel, SimConfig};
pub use mc::Estimate;
pub use regvar::{DirectionPredicate, RegVarMeasure, ScalingSequence, SetDescriptor, SpectralAtom};
