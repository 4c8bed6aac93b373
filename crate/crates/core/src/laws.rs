//! Scalar laws used for radii, Breiman factors and lemma checks.

use rand::Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::{open_unit, SimRng};

/// Something that produces one scalar per call.
pub trait ScalarSampler: Sync {
    fn sample(&self, rng: &mut SimRng) -> f64;
}

impl<F> ScalarSampler for F
where
    F: Fn(&mut SimRng) -> f64 + Sync,
{
    fn sample(&self, rng: &mut SimRng) -> f64 {
        self(rng)
    }
}

/// A few closed-form positive laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ScalarLaw {
    Constant { value: f64 },
    /// `exp(mu + sigma N)`.
    LogNormal { mu: f64, sigma: f64 },
    /// `P(Z > r) = r^{-alpha}` for `r >= 1`.
    Pareto { alpha: f64 },
}

impl ScalarLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScalarLaw::Constant { value } if !value.is_finite() => Err(domain("constant must be finite")),
            ScalarLaw::LogNormal { mu, sigma } if !(mu.is_finite() && sigma >= 0.0 && sigma.is_finite()) => {
                Err(domain("lognormal needs finite mu and sigma >= 0"))
            }
            ScalarLaw::Pareto { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                Err(domain("Pareto index must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// `E|Z|^p` when finite.
    pub fn moment(&self, p: f64) -> Option<f64> {
        match *self {
            ScalarLaw::Constant { value } => Some(value.abs().powf(p)),
            ScalarLaw::LogNormal { mu, sigma } => Some((p * mu + 0.5 * p * p * sigma * sigma).exp()),
            ScalarLaw::Pareto { alpha } => (p < alpha).then(|| alpha / (alpha - p)),
        }
    }
}

impl ScalarSampler for ScalarLaw {
    fn sample(&self, rng: &mut SimRng) -> f64 {
        match *self {
            ScalarLaw::Constant { value } => value,
            ScalarLaw::LogNormal { mu, sigma } => match LogNormal::new(mu, sigma) {
                Ok(d) => d.sample(rng),
                Err(_) => (mu + sigma * rng.sample::<f64, _>(StandardNormal)).exp(),
            },
            ScalarLaw::Pareto { alpha } => pareto(alpha, rng),
        }
    }
}

/// Exact Pareto radius on `[1, inf)` by inversion.
#[inline]
pub fn pareto<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    open_unit(rng).powf(-1.0 / alpha)
}
