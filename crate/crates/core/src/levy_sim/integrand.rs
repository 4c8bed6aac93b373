use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cadlag::{CadlagPath, Continuity, Jump};
use crate::error::{domain, Error, Result};
use crate::levy_sim::model::{uniform_grid, SimConfig};
use crate::regvar::PathSampler;
use crate::rng::Stream;

/// A user-supplied deterministic curve.
#[derive(Clone)]
pub struct CurveFn(pub Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>);

impl fmt::Debug for CurveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CurveFn(..)")
    }
}

/// Deterministic integrand shapes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Curve {
    /// `scale_k e^{rate_k t}` per component.
    Exp { scale: Vec<f64>, rate: Vec<f64> },
    /// `intercept_k + slope_k t` per component.
    Affine { intercept: Vec<f64>, slope: Vec<f64> },
    /// Arbitrary function; not serializable.
    #[serde(skip)]
    Custom { dim: usize, f: CurveFn },
}

impl Curve {
    pub fn custom(dim: usize, f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Curve {
        Curve::Custom {
            dim,
            f: CurveFn(Arc::new(f)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Curve::Exp { scale, .. } => scale.len(),
            Curve::Affine { intercept, .. } => intercept.len(),
            Curve::Custom { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        match self {
            Curve::Exp { scale, rate } => scale.iter().zip(rate).map(|(s, r)| s * (r * t).exp()).collect(),
            Curve::Affine { intercept, slope } => intercept.iter().zip(slope).map(|(a, b)| a + b * t).collect(),
            Curve::Custom { f, .. } => (f.0)(t),
        }
    }
}

/// Predictable integrands `Y`.
///
/// Paths are sampled at the grid times `t_i` and held: `Y_0 = y_0` and
/// `Y_t = y_i` on `(t_i, t_{i+1}]`, so `Y_t` only uses information from
/// before `t`. The result is càglàd with right-jumps at the grid times.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrandSpec {
    Constant {
        value: Vec<f64>,
    },
    Deterministic {
        curve: Curve,
    },
    /// `log Y` is an Ornstein-Uhlenbeck process per component, reverting at
    /// `rate` to `log long_run` (default: the initial value).
    ExpOu {
        rate: f64,
        vol_of_vol: f64,
        initial: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        long_run: Option<Vec<f64>>,
    },
}

impl IntegrandSpec {
    pub fn constant(value: Vec<f64>) -> Self {
        IntegrandSpec::Constant { value }
    }

    pub fn dim(&self) -> usize {
        match self {
            IntegrandSpec::Constant { value } => value.len(),
            IntegrandSpec::Deterministic { curve } => curve.dim(),
            IntegrandSpec::ExpOu { initial, .. } => initial.len(),
        }
    }

    /// Whether every replicate produces the same path.
    pub fn is_deterministic(&self) -> bool {
        match self {
            IntegrandSpec::ExpOu { vol_of_vol, .. } => *vol_of_vol == 0.0,
            _ => true,
        }
    }

    /// All violated invariants.
    pub fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let d = self.dim();
        if d == 0 {
            errs.push("integrand dimension must be positive".to_string());
        }
        match self {
            IntegrandSpec::Constant { value } => {
                if value.iter().any(|v| !v.is_finite() || *v == 0.0) {
                    errs.push("constant integrand components must be finite and nonzero".into());
                }
            }
            IntegrandSpec::Deterministic { curve } => match curve {
                Curve::Exp { scale, rate } => {
                    if rate.len() != d {
                        errs.push("exp curve needs one rate per component".into());
                    }
                    if scale.iter().chain(rate).any(|v| !v.is_finite()) || scale.iter().any(|s| *s == 0.0) {
                        errs.push("exp curve needs finite rates and nonzero finite scales".into());
                    }
                }
                Curve::Affine { intercept, slope } => {
                    if slope.len() != d {
                        errs.push("affine curve needs one slope per component".into());
                    }
                    if intercept.iter().chain(slope).any(|v| !v.is_finite())
                        || intercept.iter().zip(slope).any(|(a, b)| *a == 0.0 && *b == 0.0)
                    {
                        errs.push("affine curve components must be finite and not identically zero".into());
                    }
                }
                Curve::Custom { .. } => {}
            },
            IntegrandSpec::ExpOu {
                rate,
                vol_of_vol,
                initial,
                long_run,
            } => {
                if !(*rate >= 0.0 && rate.is_finite()) {
                    errs.push("mean-reversion rate must be nonnegative".into());
                }
                if !(*vol_of_vol >= 0.0 && vol_of_vol.is_finite()) {
                    errs.push("vol_of_vol must be nonnegative".into());
                }
                if initial.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    errs.push("exp-OU initial values must be positive".into());
                }
                if let Some(l) = long_run {
                    if l.len() != d || l.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                        errs.push("exp-OU long-run levels must be positive, one per component".into());
                    }
                }
            }
        }
        errs
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.violations();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// Grid samples `y_0, ..., y_n` (row-major).
    fn samples(&self, cfg: &SimConfig, grid: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        let mut out = Vec::with_capacity(grid.len() * d);
        match self {
            IntegrandSpec::Constant { value } => {
                for _ in grid {
                    out.extend_from_slice(value);
                }
            }
            IntegrandSpec::Deterministic { curve } => {
                for &t in grid {
                    let v = curve.eval(t);
                    if v.len() != d || v.iter().any(|x| !x.is_finite()) {
                        return Err(domain("curve returned a malformed value"));
                    }
                    out.extend(v);
                }
            }
            IntegrandSpec::ExpOu {
                rate,
                vol_of_vol,
                initial,
                long_run,
            } => {
                let mut log_y: Vec<f64> = initial.iter().map(|v| v.ln()).collect();
                let target: Vec<f64> = long_run.as_ref().unwrap_or(initial).iter().map(|v| v.ln()).collect();
                let mut rng = cfg.rng(Stream::Integrand);
                out.extend(log_y.iter().map(|l| l.exp()));
                for w in grid.windows(2) {
                    let h = w[1] - w[0];
                    let decay = (-rate * h).exp();
                    let sd = if *rate > 0.0 {
                        vol_of_vol * ((1.0 - decay * decay) / (2.0 * rate)).sqrt()
                    } else {
                        vol_of_vol * h.sqrt()
                    };
                    for (l, m) in log_y.iter_mut().zip(&target) {
                        let z: f64 = if sd > 0.0 { rng.sample(StandardNormal) } else { 0.0 };
                        *l = m + (*l - m) * decay + sd * z;
                    }
                    out.extend(log_y.iter().map(|l| l.exp()));
                }
            }
        }
        Ok(out)
    }

    /// Predictable hold path on the uniform grid of `cfg`.
    pub fn simulate(&self, cfg: &SimConfig) -> Result<CadlagPath> {
        cfg.validate()?;
        self.validate()?;
        let grid = uniform_grid(cfg.grid_size);
        let samples = self.samples(cfg, &grid)?;
        hold_path(self.dim(), grid, &samples)
    }
}

/// Left-continuous hold path through the samples: value `y_{i-1}` at `t_i`
/// and right-jump `y_i - y_{i-1}` there.
pub fn hold_path(dim: usize, grid: Vec<f64>, samples: &[f64]) -> Result<CadlagPath> {
    let n = grid.len();
    let mut values = Vec::with_capacity(n * dim);
    values.extend_from_slice(&samples[..dim]);
    values.extend_from_slice(&samples[..(n - 1) * dim]);
    let mut jumps = Vec::new();
    for i in 1..n - 1 {
        let size: Vec<f64> = (0..dim)
            .map(|k| samples[i * dim + k] - samples[(i - 1) * dim + k])
            .collect();
        if size.iter().any(|&s| s != 0.0) {
            jumps.push(Jump { t: grid[i], size });
        }
    }
    CadlagPath::from_flat(dim, grid, values, jumps, Continuity::Left)
}

/// Draws integrand paths on a fixed grid size.
#[derive(Debug, Clone)]
pub struct IntegrandSampler {
    spec: IntegrandSpec,
    grid_size: usize,
}

impl IntegrandSampler {
    pub fn new(spec: IntegrandSpec, grid_size: usize) -> Result<Self> {
        spec.validate()?;
        SimConfig::new(grid_size, 0, 0).validate()?;
        Ok(IntegrandSampler { spec, grid_size })
    }

    pub fn spec(&self) -> &IntegrandSpec {
        &self.spec
    }
}

impl PathSampler for IntegrandSampler {
    fn sample_path(&self, seed: u64, replicate: u64) -> CadlagPath {
        self.spec
            .simulate(&SimConfig::new(self.grid_size, seed, replicate))
            .expect("validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> SimConfig {
        SimConfig::new(n, 1, 2)
    }

    #[test]
    fn constant_is_flat() {
        let y = IntegrandSpec::constant(vec![2.0, 3.0]).simulate(&cfg(8)).unwrap();
        assert!(y.jumps().is_empty());
        assert_eq!(y.continuity(), Continuity::Left);
        assert_eq!(y.eval(0.37), vec![2.0, 3.0]);
        assert_eq!(y.right_limit(1.0), vec![2.0, 3.0]);
    }

    #[test]
    fn deterministic_hold_is_left_continuous() {
        let spec = IntegrandSpec::Deterministic {
            curve: Curve::Exp {
                scale: vec![1.0],
                rate: vec![-1.0],
            },
        };
        let y = spec.simulate(&cfg(4)).unwrap();
        // value at t = 0.5 is the sample from 0.25, right limit is e^{-0.5}
        assert_eq!(y.eval(0.5), vec![(-0.25f64).exp()]);
        assert_eq!(y.right_limit(0.5), vec![(-0.5f64).exp()]);
        assert_eq!(y.eval(0.6), vec![(-0.5f64).exp()]);
        assert_eq!(y.eval(0.0), vec![1.0]);
    }

    #[test]
    fn ou_without_noise_follows_mean_path() {
        let spec = IntegrandSpec::ExpOu {
            rate: 2.0,
            vol_of_vol: 0.0,
            initial: vec![2.0],
            long_run: Some(vec![1.0]),
        };
        assert!(spec.is_deterministic());
        let y = spec.simulate(&cfg(64)).unwrap();
        let mean = |t: f64| (2f64.ln() * (-2.0 * t).exp()).exp();
        for i in 0..64 {
            let t = i as f64 / 64.0;
            assert!((y.right_limit(t)[0] - mean(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn ou_paths_are_positive_and_reproducible() {
        let spec = IntegrandSpec::ExpOu {
            rate: 1.0,
            vol_of_vol: 0.8,
            initial: vec![1.0, 0.5],
            long_run: None,
        };
        let a = spec.simulate(&cfg(128)).unwrap();
        let b = spec.simulate(&cfg(128)).unwrap();
        assert_eq!(a, b);
        assert!(a.component_sup().iter().all(|&s| s > 0.0));
        let mut buf = vec![0.0; 2];
        for i in 0..a.grid().len() {
            a.post(i, &mut buf);
            assert!(buf.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn violations_are_collected() {
        let spec = IntegrandSpec::ExpOu {
            rate: -1.0,
            vol_of_vol: -0.1,
            initial: vec![0.0],
            long_run: None,
        };
        assert_eq!(spec.violations().len(), 3);
        assert!(IntegrandSpec::constant(vec![1.0, 0.0]).validate().is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = IntegrandSpec::ExpOu {
            rate: 1.5,
            vol_of_vol: 0.3,
            initial: vec![1.0],
            long_run: Some(vec![0.8]),
        };
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"kind\":\"exp_ou\""));
        let back: IntegrandSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let custom = IntegrandSpec::Deterministic {
            curve: Curve::custom(1, |t| vec![1.0 + t]),
        };
        assert!(serde_json::to_string(&custom).is_err());
    }
}
