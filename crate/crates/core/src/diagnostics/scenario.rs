use std::borrow::Cow;

use crate::cadlag::CadlagPath;
use crate::error::{check_dim, Result};
use crate::levy_sim::{stochastic_integral, IntegrandSpec, LevyModel, SimConfig};
use crate::regvar::PathSampler;

/// A Lévy model paired with an integrand on a fixed grid.
#[derive(Debug, Clone)]
pub struct Scenario {
    model: LevyModel,
    integrand: IntegrandSpec,
    grid_size: usize,
    fixed: Option<CadlagPath>,
}

/// One simulated replicate.
#[derive(Debug, Clone)]
pub struct Replicate<'a> {
    pub x: CadlagPath,
    pub y: Cow<'a, CadlagPath>,
    pub w: CadlagPath,
}

impl Scenario {
    pub fn new(model: LevyModel, integrand: IntegrandSpec, grid_size: usize) -> Result<Self> {
        check_dim(model.dim(), integrand.dim())?;
        integrand.validate()?;
        SimConfig::new(grid_size, 0, 0).validate()?;
        let fixed = if integrand.is_deterministic() {
            Some(integrand.simulate(&SimConfig::new(grid_size, 0, 0))?)
        } else {
            None
        };
        Ok(Scenario {
            model,
            integrand,
            grid_size,
            fixed,
        })
    }

    pub fn model(&self) -> &LevyModel {
        &self.model
    }

    pub fn integrand(&self) -> &IntegrandSpec {
        &self.integrand
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn config(&self, seed: u64, replicate: u64) -> SimConfig {
        SimConfig::new(self.grid_size, seed, replicate)
    }

    pub fn levy_path(&self, seed: u64, replicate: u64) -> CadlagPath {
        self.model
            .simulate(&self.config(seed, replicate))
            .expect("scenario grid validated")
    }

    pub fn integrand_path(&self, seed: u64, replicate: u64) -> Cow<'_, CadlagPath> {
        match &self.fixed {
            Some(p) => Cow::Borrowed(p),
            None => Cow::Owned(
                self.integrand
                    .simulate(&self.config(seed, replicate))
                    .expect("scenario integrand validated"),
            ),
        }
    }

    /// `X`, `Y` and `W = Y · X` for one replicate.
    pub fn replicate(&self, seed: u64, replicate: u64) -> Replicate<'_> {
        let x = self.levy_path(seed, replicate);
        let y = self.integrand_path(seed, replicate);
        let w = stochastic_integral(&y, &x).expect("dimensions checked");
        Replicate { x, y, w }
    }
}

impl PathSampler for Scenario {
    fn sample_path(&self, seed: u64, replicate: u64) -> CadlagPath {
        self.integrand_path(seed, replicate).into_owned()
    }
}
