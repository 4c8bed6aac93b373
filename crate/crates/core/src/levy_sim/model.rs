use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cadlag::{merge_grids, norm, CadlagPath, Continuity, Jump};
use crate::error::{check_dim, domain, Error, Result};
use crate::laws::pareto;
use crate::regvar::{validate_spectral, RegVarMeasure, ScalingSequence, SpectralAtom};
use crate::rng::{open_unit, stream_rng, Stream};

/// Default number of uniform steps on `[0, 1]`.
pub const DEFAULT_GRID_SIZE: usize = 4096;

/// Default exponent for the big-jump threshold `a(n)^β`.
pub const DEFAULT_BETA: f64 = 0.75;

/// Where a single simulated replicate lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid_size: usize,
    pub seed: u64,
    pub replicate_index: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            grid_size: DEFAULT_GRID_SIZE,
            seed: 0,
            replicate_index: 0,
        }
    }
}

impl SimConfig {
    pub fn new(grid_size: usize, seed: u64, replicate_index: u64) -> Self {
        SimConfig {
            grid_size,
            seed,
            replicate_index,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(domain("grid_size must be at least 2"));
        }
        Ok(())
    }

    /// `0, 1/n, ..., 1` with the last point exactly 1.
    pub fn uniform_grid(&self) -> Vec<f64> {
        uniform_grid(self.grid_size)
    }

    pub(crate) fn rng(&self, stream: Stream) -> crate::rng::SimRng {
        stream_rng(self.seed, self.replicate_index, stream)
    }
}

pub(crate) fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// A Lévy process with compound Poisson Pareto jumps of size at least 1 plus
/// a Brownian motion with drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct LevyModel {
    intensity: f64,
    alpha: f64,
    spectral: Vec<SpectralAtom>,
    diffusion: Vec<Vec<f64>>,
    drift: Vec<f64>,
}

/// Unvalidated wire form of [`LevyModel`].
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModelRepr {
    pub(crate) intensity: f64,
    pub(crate) alpha: f64,
    pub(crate) spectral: Vec<SpectralAtom>,
    #[serde(default)]
    pub(crate) diffusion: Vec<Vec<f64>>,
    #[serde(default)]
    pub(crate) drift: Vec<f64>,
}

impl TryFrom<ModelRepr> for LevyModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        LevyModel::new(r.intensity, r.alpha, r.spectral, r.diffusion, r.drift)
    }
}

impl From<LevyModel> for ModelRepr {
    fn from(m: LevyModel) -> Self {
        ModelRepr {
            intensity: m.intensity,
            alpha: m.alpha,
            spectral: m.spectral,
            diffusion: m.diffusion,
            drift: m.drift,
        }
    }
}

impl LevyModel {
    /// Empty `diffusion` or `drift` mean zero.
    pub fn new(
        intensity: f64,
        alpha: f64,
        spectral: Vec<SpectralAtom>,
        diffusion: Vec<Vec<f64>>,
        drift: Vec<f64>,
    ) -> Result<Self> {
        let mut errs = Vec::new();
        if !(intensity > 0.0 && intensity.is_finite()) {
            errs.push("jump intensity must be positive".to_string());
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            errs.push("alpha must be positive".to_string());
        }
        errs.extend(validate_spectral(&spectral));
        let d = spectral.first().map_or(0, |a| a.dir.len());
        let diffusion = if diffusion.is_empty() {
            vec![vec![0.0; d]; d]
        } else {
            diffusion
        };
        let drift = if drift.is_empty() { vec![0.0; d] } else { drift };
        if diffusion.len() != d || diffusion.iter().any(|row| row.len() != d) {
            errs.push(format!("diffusion must be a {d}x{d} matrix"));
        }
        if diffusion.iter().flatten().any(|v| !v.is_finite()) {
            errs.push("diffusion entries must be finite".to_string());
        }
        if drift.len() != d {
            errs.push(format!("drift must have length {d}"));
        }
        if drift.iter().any(|v| !v.is_finite()) {
            errs.push("drift entries must be finite".to_string());
        }
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        Ok(LevyModel {
            intensity,
            alpha,
            spectral,
            diffusion,
            drift,
        })
    }

    /// One-dimensional model with positive jumps only.
    pub fn one_sided(intensity: f64, alpha: f64, sigma: f64, drift: f64) -> Result<Self> {
        LevyModel::new(
            intensity,
            alpha,
            vec![SpectralAtom { dir: vec![1.0], w: 1.0 }],
            vec![vec![sigma]],
            vec![drift],
        )
    }

    pub fn dim(&self) -> usize {
        self.drift.len()
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn spectral(&self) -> &[SpectralAtom] {
        &self.spectral
    }

    pub fn diffusion(&self) -> &[Vec<f64>] {
        &self.diffusion
    }

    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    /// Limit measure of the jumps: `c = λ`, same index and spectral measure.
    pub fn measure(&self) -> RegVarMeasure {
        RegVarMeasure::new(self.alpha, self.intensity, self.spectral.clone())
            .expect("model invariants imply a valid measure")
    }

    pub fn scaling(&self) -> ScalingSequence {
        self.measure().scaling()
    }

    fn has_diffusion(&self) -> bool {
        self.diffusion.iter().flatten().any(|&v| v != 0.0)
    }

    /// Compound Poisson jumps on `(0, 1]`, sorted by time.
    pub fn simulate_big_jumps(&self, cfg: &SimConfig) -> Vec<Jump> {
        let mut rng = cfg.rng(Stream::Jumps);
        let count = Poisson::new(self.intensity)
            .map(|p| p.sample(&mut rng) as usize)
            .unwrap_or(0);
        if count == 0 {
            return Vec::new();
        }
        let pick = WeightedIndex::new(self.spectral.iter().map(|a| a.w))
            .expect("spectral weights are valid");
        let mut jumps: Vec<Jump> = (0..count)
            .map(|_| {
                let t = open_unit(&mut rng);
                let r = pareto(self.alpha, &mut rng);
                let dir = &self.spectral[pick.sample(&mut rng)].dir;
                Jump {
                    t,
                    size: dir.iter().map(|c| r * c).collect(),
                }
            })
            .collect();
        jumps.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        jumps.dedup_by(|b, a| a.t == b.t);
        jumps
    }

    /// `γ t + S B_t` on the uniform grid, with no jumps.
    pub fn simulate_small_part(&self, cfg: &SimConfig) -> Result<CadlagPath> {
        cfg.validate()?;
        let d = self.dim();
        let n = cfg.grid_size;
        let grid = cfg.uniform_grid();
        let mut values = Vec::with_capacity((n + 1) * d);
        let sd = (1.0 / n as f64).sqrt();
        let mut brownian = vec![0.0; d];
        let mut noise = vec![0.0; d];
        let diffuse = self.has_diffusion();
        let mut rng = cfg.rng(Stream::Gaussian);
        for (i, &t) in grid.iter().enumerate() {
            if diffuse && i > 0 {
                for z in noise.iter_mut() {
                    *z = rng.sample::<f64, _>(StandardNormal) * sd;
                }
                for (k, b) in brownian.iter_mut().enumerate() {
                    *b += self.diffusion[k].iter().zip(&noise).map(|(s, z)| s * z).sum::<f64>();
                }
            }
            values.extend((0..d).map(|k| self.drift[k] * t + brownian[k]));
        }
        CadlagPath::from_flat(d, grid, values, Vec::new(), Continuity::Right)
    }

    /// A full replicate `X = X̃ + J`.
    pub fn simulate(&self, cfg: &SimConfig) -> Result<CadlagPath> {
        let small = self.simulate_small_part(cfg)?;
        assemble_levy_path(&small, &self.simulate_big_jumps(cfg))
    }
}

/// `X̃ + J` on the merged grid; the jump list of the result is `jumps`.
pub fn assemble_levy_path(small: &CadlagPath, jumps: &[Jump]) -> Result<CadlagPath> {
    if small.continuity() != Continuity::Right || !small.jumps().is_empty() {
        return Err(domain("the light-tailed part must be a continuous càdlàg path"));
    }
    let d = small.dim();
    for j in jumps {
        check_dim(d, j.size.len())?;
    }
    if jumps.is_empty() {
        return Ok(small.clone());
    }
    let times: Vec<f64> = jumps.iter().map(|j| j.t).collect();
    let grid = merge_grids(small.grid(), &times);
    let mut values = Vec::with_capacity(grid.len() * d);
    let mut cum = vec![0.0; d];
    let mut base = vec![0.0; d];
    let mut next = 0;
    let mut sweep = small.sweep();
    for &t in &grid {
        while next < jumps.len() && jumps[next].t <= t {
            cum.iter_mut().zip(&jumps[next].size).for_each(|(c, s)| *c += s);
            next += 1;
        }
        sweep.right(t, &mut base);
        values.extend(base.iter().zip(&cum).map(|(b, c)| b + c));
    }
    CadlagPath::from_flat(d, grid, values, jumps.to_vec(), Continuity::Right)
}

/// Jumps split at the threshold `a(n)^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSplit {
    pub big: Vec<Jump>,
    pub small: Vec<Jump>,
    pub threshold: f64,
}

impl ThresholdSplit {
    /// Number of jumps above the threshold.
    pub fn count(&self) -> usize {
        self.big.len()
    }
}

/// Partition jumps by norm at `a(n)^β`.
pub fn threshold_jumps(jumps: &[Jump], n: u64, beta: f64, seq: &ScalingSequence) -> Result<ThresholdSplit> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(domain("beta must lie in (1/2, 1)"));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let threshold = seq.at(n).powf(beta);
    let (big, small) = jumps.iter().cloned().partition(|j| norm(&j.size) > threshold);
    Ok(ThresholdSplit { big, small, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::MeanVar;

    fn model(lambda: f64, sigma: f64, drift: f64) -> LevyModel {
        LevyModel::one_sided(lambda, 1.5, sigma, drift).unwrap()
    }

    #[test]
    fn tiny_intensity_gives_no_jumps() {
        let m = model(1e-12, 0.0, 0.0);
        let empty = (0..1000)
            .filter(|&r| m.simulate_big_jumps(&SimConfig::new(8, 3, r)).is_empty())
            .count();
        assert_eq!(empty, 1000);
    }

    #[test]
    fn mean_jump_count_and_radius_tail() {
        let m = model(1.0, 0.0, 0.0);
        let reps = 100_000u64;
        let mut count = 0usize;
        let mut radii = Vec::new();
        for r in 0..reps {
            let jumps = m.simulate_big_jumps(&SimConfig::new(8, 17, r));
            count += jumps.len();
            radii.extend(jumps.iter().map(|j| j.norm()));
        }
        let mean = count as f64 / reps as f64;
        assert!((mean - 1.0).abs() < 3.0 * 10f64.powf(-2.5), "{mean}");
        assert!(radii.iter().all(|&r| r >= 1.0));
        let n = radii.len() as f64;
        let p = radii.iter().filter(|&&r| r > 4.0).count() as f64 / n;
        assert!((p - 0.125).abs() < 3.0 * (0.125 * 0.875 / n).sqrt(), "{p}");
    }

    #[test]
    fn jump_times_sorted_in_unit_interval() {
        let m = model(5.0, 0.0, 0.0);
        for r in 0..200 {
            let j = m.simulate_big_jumps(&SimConfig::new(8, 1, r));
            assert!(j.windows(2).all(|w| w[0].t < w[1].t));
            assert!(j.iter().all(|x| x.t > 0.0 && x.t <= 1.0));
        }
    }

    #[test]
    fn small_part_examples() {
        let zero = model(1.0, 0.0, 0.0).simulate_small_part(&SimConfig::new(16, 0, 0)).unwrap();
        assert_eq!(zero.sup_norm(), 0.0);
        let drift = model(1.0, 0.0, 1.0).simulate_small_part(&SimConfig::new(17, 0, 0)).unwrap();
        assert_eq!(drift.eval(1.0), vec![1.0]);
        assert!(drift.jumps().is_empty());
        assert!(SimConfig::new(1, 0, 0).validate().is_err());
    }

    #[test]
    fn brownian_endpoint_variance() {
        let m = model(1.0, 1.0, 0.0);
        let mut stats = MeanVar::default();
        for r in 0..10_000 {
            let p = m.simulate_small_part(&SimConfig::new(32, 9, r)).unwrap();
            stats.push(p.eval(1.0)[0]);
        }
        assert!((stats.variance() - 1.0).abs() < 3.0 * (2.0f64 / 1e4).sqrt());
    }

    #[test]
    fn assemble_examples() {
        let m = model(1.0, 0.0, 0.0);
        let small = m.simulate_small_part(&SimConfig::new(8, 0, 0)).unwrap();
        assert_eq!(assemble_levy_path(&small, &[]).unwrap(), small);
        let j = vec![Jump { t: 0.5, size: vec![2.5] }];
        let x = assemble_levy_path(&small, &j).unwrap();
        assert_eq!(x.uniform_distance(&CadlagPath::step(vec![2.5], 0.5).unwrap()).unwrap(), 0.0);
        let j = vec![Jump { t: 0.3, size: vec![2.0] }, Jump { t: 0.61, size: vec![-4.0] }];
        let x = assemble_levy_path(&small, &j).unwrap();
        assert_eq!(x.jumps(), j.as_slice());
        assert_eq!(x.largest_jump_time(), 0.61);
    }

    #[test]
    fn determinism_and_independence() {
        let m = model(3.0, 1.0, 0.2);
        let a = m.simulate(&SimConfig::new(64, 5, 7)).unwrap();
        let b = m.simulate(&SimConfig::new(64, 5, 7)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = m.simulate(&SimConfig::new(64, 5, 8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn threshold_examples() {
        let seq = ScalingSequence::new(1.5, 1.0).unwrap();
        let jumps = vec![Jump { t: 0.2, size: vec![1.5] }, Jump { t: 0.4, size: vec![150.0] }];
        let s = threshold_jumps(&jumps, 10_000, 0.75, &seq).unwrap();
        assert!((s.threshold - 100.0).abs() < 1e-9);
        assert_eq!(s.count(), 1);
        let s = threshold_jumps(&jumps, 1_000_000_000_000, 0.75, &seq).unwrap();
        assert_eq!((s.big.len(), s.small.len()), (0, 2));
        // n = 1 puts the threshold at 1, below every jump
        let s = threshold_jumps(&jumps, 1, 0.75, &seq).unwrap();
        assert_eq!(s.count(), 2);
        assert!(threshold_jumps(&jumps, 10, 0.4, &seq).is_err());
        assert!(threshold_jumps(&jumps, 10, 1.0, &seq).is_err());
    }

    #[test]
    fn model_json_round_trip_and_validation() {
        let m = model(2.0, 0.5, -0.1);
        let s = serde_json::to_string(&m).unwrap();
        let back: LevyModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"intensity":-1,"alpha":1.5,"spectral":[{"dir":[1],"w":1}],"drift":[0,0]}"#;
        let err = serde_json::from_str::<LevyModel>(bad).unwrap_err().to_string();
        assert!(err.contains("intensity") && err.contains("drift"), "{err}");
        assert_eq!(m.measure().intensity(), 2.0);
    }
}
