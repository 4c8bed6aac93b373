//! Lévy paths, predictable integrands and stochastic integrals.

mod integral;
mod integrand;
mod model;

pub use integral::{one_jump_integral, stochastic_integral};
pub use integrand::{hold_path, Curve, CurveFn, IntegrandSampler, IntegrandSpec};
pub use model::{
    assemble_levy_path, threshold_jumps, LevyModel, SimConfig, ThresholdSplit, DEFAULT_BETA, DEFAULT_GRID_SIZE,
};
pub(crate) use model::ModelRepr;
