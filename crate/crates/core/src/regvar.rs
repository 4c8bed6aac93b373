//! Limit measures of regular variation.
//!
//! [`RegVarMeasure`] is the homogeneous measure `μ` on `R^d \ {0}` in polar
//! form, `μ{x : |x| > r, x/|x| ∈ A} = c r^{-α} σ(A)` with a finite spectral
//! measure `σ`. On path space the measure `m` charges only one-step functions
//! `y 1_[v, 1]` with `v` uniform, and the integral measure `m*` replaces `y`
//! by `Y_V ∘ y` for an independent integrand `Y`.

use serde::{Deserialize, Serialize};

use crate::cadlag::{norm, CadlagPath};
use crate::error::{domain, Error, Result};
use crate::laws::ScalarSampler;
use crate::mc::{par_fold, Estimate, MeanVar};
use crate::rng::{stream_rng, Stream};

const UNIT_TOL: f64 = 1e-12;

/// One atom of the spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    pub dir: Vec<f64>,
    pub w: f64,
}

/// Polar-form limit measure with a finite spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct RegVarMeasure {
    alpha: f64,
    intensity: f64,
    spectral: Vec<SpectralAtom>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    alpha: f64,
    c: f64,
    spectral: Vec<SpectralAtom>,
}

impl TryFrom<MeasureRepr> for RegVarMeasure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        RegVarMeasure::new(r.alpha, r.c, r.spectral)
    }
}

impl From<RegVarMeasure> for MeasureRepr {
    fn from(m: RegVarMeasure) -> Self {
        MeasureRepr {
            alpha: m.alpha,
            c: m.intensity,
            spectral: m.spectral,
        }
    }
}

pub(crate) fn validate_spectral(spectral: &[SpectralAtom]) -> Vec<String> {
    let mut errs = Vec::new();
    let Some(first) = spectral.first() else {
        return vec!["spectral measure needs at least one atom".into()];
    };
    let d = first.dir.len();
    if d == 0 {
        errs.push("spectral directions must be nonempty vectors".into());
    }
    let mut total = 0.0;
    for (i, a) in spectral.iter().enumerate() {
        if a.dir.len() != d {
            errs.push(format!("spectral atom {i} has dimension {}, expected {d}", a.dir.len()));
        }
        if (norm(&a.dir) - 1.0).abs() > UNIT_TOL {
            errs.push(format!("spectral direction {i} is not a unit vector"));
        }
        if !(a.w >= 0.0) {
            errs.push(format!("spectral weight {i} must be nonnegative"));
        }
        total += a.w;
    }
    if (total - 1.0).abs() > UNIT_TOL {
        errs.push(format!("spectral weights sum to {total}, not 1"));
    }
    errs
}

impl RegVarMeasure {
    pub fn new(alpha: f64, intensity: f64, spectral: Vec<SpectralAtom>) -> Result<Self> {
        let mut errs = Vec::new();
        if !(alpha > 0.0 && alpha.is_finite()) {
            errs.push("alpha must be positive".to_string());
        }
        if !(intensity > 0.0 && intensity.is_finite()) {
            errs.push("intensity c must be positive".to_string());
        }
        errs.extend(validate_spectral(&spectral));
        if errs.is_empty() {
            Ok(RegVarMeasure {
                alpha,
                intensity,
                spectral,
            })
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// One-dimensional measure with all mass on the positive half-line.
    pub fn positive(alpha: f64, intensity: f64) -> Result<Self> {
        Self::two_sided(alpha, intensity, 1.0)
    }

    /// One-dimensional measure with weight `p` on `+1` and `1 - p` on `-1`.
    pub fn two_sided(alpha: f64, intensity: f64, p: f64) -> Result<Self> {
        Self::new(
            alpha,
            intensity,
            vec![
                SpectralAtom { dir: vec![1.0], w: p },
                SpectralAtom { dir: vec![-1.0], w: 1.0 - p },
            ],
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn spectral(&self) -> &[SpectralAtom] {
        &self.spectral
    }

    pub fn dim(&self) -> usize {
        self.spectral[0].dir.len()
    }

    pub fn scaling(&self) -> ScalingSequence {
        ScalingSequence {
            alpha: self.alpha,
            intensity: self.intensity,
        }
    }

    /// `σ(A)`; the full mass 1 when `pred` is `None`.
    pub fn spectral_mass(&self, pred: Option<&DirectionPredicate>) -> Result<f64> {
        let Some(pred) = pred else { return Ok(1.0) };
        pred.check_dim(self.dim())?;
        Ok(self
            .spectral
            .iter()
            .filter(|a| pred.contains(&a.dir))
            .map(|a| a.w)
            .sum())
    }

    /// `μ{x : |x| > r, x/|x| ∈ A} = c r^{-α} σ(A)`.
    pub fn mu_tail(&self, r: f64, pred: Option<&DirectionPredicate>) -> Result<f64> {
        if !(r > 0.0) {
            return Err(domain(format!("radius must be positive, got {r}")));
        }
        Ok(self.intensity * r.powf(-self.alpha) * self.spectral_mass(pred)?)
    }

    /// `Σ_j w_j (|s ∘ θ_j| / |θ_j|)^α` over atoms whose scaled direction lies in `pred`.
    ///
    /// This is `μ{x : |s ∘ x| > 1, s ∘ x ∈ cone} / c`.
    fn scaled_mass(&self, s: &[f64], pred: &DirectionPredicate, buf: &mut [f64]) -> f64 {
        let mut total = 0.0;
        for a in &self.spectral {
            if a.w == 0.0 {
                continue;
            }
            for k in 0..buf.len() {
                buf[k] = s[k] * a.dir[k];
            }
            let n = norm(buf);
            if n > 0.0 && pred.contains(buf) {
                total += a.w * (n / norm(&a.dir)).powf(self.alpha);
            }
        }
        total
    }

    /// `m(B) = ∫_0^1 μ{y : y 1_[t, 1] ∈ B} dt` in closed form.
    pub fn m_eval(&self, set: &SetDescriptor) -> Result<f64> {
        let r = set.reduce(self.dim())?;
        if r.empty {
            return Ok(0.0);
        }
        Ok(r.horizon * self.mu_tail(r.level, Some(r.cone))?)
    }

    /// Monte Carlo estimate of `m*(B) = E μ{x : Y_V x 1_[V, 1] ∈ B}`.
    ///
    /// The inner μ-mass is exact. For each integrand draw the average over
    /// `V` is an exact time integral along the path (constant pieces) or a
    /// composite Simpson rule (sloped pieces), so the only sampling noise
    /// comes from the integrand.
    pub fn mstar_eval<S: PathSampler + ?Sized>(
        &self,
        integrand: &S,
        set: &SetDescriptor,
        n_mc: u64,
        seed: u64,
    ) -> Result<Estimate> {
        if n_mc == 0 {
            return Err(domain("n_mc must be positive"));
        }
        let r = set.reduce(self.dim())?;
        if r.empty {
            return Ok(Estimate {
                mean: 0.0,
                stderr: 0.0,
                n: n_mc,
            });
        }
        let scale = self.intensity * r.level.powf(-self.alpha);
        let d = self.dim();

        #[derive(Default)]
        struct Acc {
            stats: MeanVar,
            err: Option<String>,
        }
        let acc = par_fold(
            n_mc,
            Acc::default,
            |acc, rep| {
                if acc.err.is_some() {
                    return;
                }
                let y = integrand.sample_path(seed, rep);
                if y.dim() != d {
                    acc.err = Some(format!("integrand has dimension {}, measure has {d}", y.dim()));
                    return;
                }
                if y.component_sup().iter().any(|&s| !(s > 0.0)) {
                    acc.err = Some("integrand has a component with zero sup norm".into());
                    return;
                }
                let mut buf = vec![0.0; d];
                let inner = time_integral(&y, r.horizon, |v| self.scaled_mass(v, r.cone, &mut buf));
                acc.stats.push(scale * inner);
            },
            |a, b| Acc {
                err: a.err.or(b.err),
                stats: a.stats.merge(b.stats),
            },
        );
        match acc.err {
            Some(e) => Err(domain(e)),
            None => Ok(acc.stats.into()),
        }
    }
}

/// `∫_0^horizon g(y_v) dv` along a piecewise-linear path.
pub(crate) fn time_integral(y: &CadlagPath, horizon: f64, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
    const PANELS: usize = 8;
    let grid = y.grid();
    let d = y.dim();
    let (mut a, mut b, mut p) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut total = 0.0;
    for i in 0..grid.len() - 1 {
        let (t0, t1) = (grid[i], grid[i + 1]);
        if t0 >= horizon {
            break;
        }
        let end = t1.min(horizon);
        y.post(i, &mut a);
        y.pre(i + 1, &mut b);
        if a == b {
            total += g(&a) * (end - t0);
            continue;
        }
        let h = (end - t0) / PANELS as f64;
        let mut s = 0.0;
        for k in 0..=PANELS {
            let w = (k as f64 * h) / (t1 - t0);
            for j in 0..d {
                p[j] = a[j] + w * (b[j] - a[j]);
            }
            let coef = if k == 0 || k == PANELS {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += coef * g(&p);
        }
        total += s * h / 3.0;
    }
    total
}

/// Normalizing sequence `a(n) = (c n)^{1/α}`, the exact `1/n` tail quantile of μ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingSequence {
    alpha: f64,
    intensity: f64,
}

impl ScalingSequence {
    pub fn new(alpha: f64, intensity: f64) -> Result<Self> {
        if !(alpha > 0.0 && intensity > 0.0) {
            return Err(domain("alpha and c must be positive"));
        }
        Ok(ScalingSequence { alpha, intensity })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn at(&self, n: u64) -> f64 {
        (self.intensity * n as f64).powf(1.0 / self.alpha)
    }
}

/// A set of directions on the unit sphere.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DirectionPredicate {
    #[default]
    All,
    /// Directions with a positive inner product with `normal`.
    HalfSpace { normal: Vec<f64> },
    /// Directions within angle `acos(min_cos)` of `center`.
    Cap { center: Vec<f64>, min_cos: f64 },
}

impl DirectionPredicate {
    /// The positive half-line in dimension one.
    pub fn positive() -> Self {
        DirectionPredicate::HalfSpace { normal: vec![1.0] }
    }

    /// Whether the direction of the nonzero vector `v` belongs to the set.
    pub fn contains(&self, v: &[f64]) -> bool {
        match self {
            DirectionPredicate::All => true,
            DirectionPredicate::HalfSpace { normal } => dot(normal, v) > 0.0,
            DirectionPredicate::Cap { center, min_cos } => {
                let n = norm(center) * norm(v);
                n > 0.0 && dot(center, v) / n >= *min_cos
            }
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self {
            DirectionPredicate::All => Ok(()),
            DirectionPredicate::HalfSpace { normal: v } | DirectionPredicate::Cap { center: v, .. } => {
                if v.len() != d {
                    return Err(Error::Unsupported(format!(
                        "direction predicate of dimension {} on a {d}-dimensional measure",
                        v.len()
                    )));
                }
                if norm(v) == 0.0 {
                    return Err(domain("direction predicate needs a nonzero vector"));
                }
                Ok(())
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Path-space sets bounded away from the zero path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetDescriptor {
    /// `{x : |x|_∞ > level}`.
    SupNorm { level: f64 },
    /// `{x : |x_t| > level, x_t/|x_t| ∈ cone}`.
    Endpoint {
        t: f64,
        level: f64,
        #[serde(default)]
        cone: DirectionPredicate,
    },
    /// `{x : some s ≤ t has |x_s| > level, x_s/|x_s| ∈ cone}`; in dimension
    /// one with the positive cone this is `sup_{s ≤ t} x_s > level`.
    RunningSup {
        t: f64,
        level: f64,
        #[serde(default)]
        cone: DirectionPredicate,
    },
    /// `{x : |x_1| > radius, x_1/|x_1| ∈ cone}`.
    RadialCone {
        radius: f64,
        #[serde(default)]
        cone: DirectionPredicate,
    },
    /// Paths with γ-oscillation at least `count` times.
    Oscillation { gamma: f64, count: usize },
}

struct Reduced<'a> {
    level: f64,
    horizon: f64,
    cone: &'a DirectionPredicate,
    empty: bool,
}

const ALL: DirectionPredicate = DirectionPredicate::All;

impl SetDescriptor {
    /// The set multiplied by `u > 0`.
    pub fn scaled(&self, u: f64) -> SetDescriptor {
        let mut s = self.clone();
        match &mut s {
            SetDescriptor::SupNorm { level }
            | SetDescriptor::Endpoint { level, .. }
            | SetDescriptor::RunningSup { level, .. } => *level *= u,
            SetDescriptor::RadialCone { radius, .. } => *radius *= u,
            SetDescriptor::Oscillation { gamma, .. } => *gamma *= u,
        }
        s
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        self.reduce(dim).map(|_| ())
    }

    /// On one-step functions every supported set is a radial cone in the
    /// jump, restricted to jump times in `[0, horizon]`.
    fn reduce(&self, dim: usize) -> Result<Reduced<'_>> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(domain(format!("{name} must be positive so the set avoids the zero path, got {v}")))
            }
        };
        let time = |t: f64| {
            if (0.0..=1.0).contains(&t) {
                Ok(t)
            } else {
                Err(domain(format!("time {t} outside [0, 1]")))
            }
        };
        let r = match self {
            SetDescriptor::SupNorm { level } => Reduced {
                level: positive("level", *level)?,
                horizon: 1.0,
                cone: &ALL,
                empty: false,
            },
            SetDescriptor::Endpoint { t, level, cone } | SetDescriptor::RunningSup { t, level, cone } => Reduced {
                level: positive("level", *level)?,
                horizon: time(*t)?,
                cone,
                empty: false,
            },
            SetDescriptor::RadialCone { radius, cone } => Reduced {
                level: positive("radius", *radius)?,
                horizon: 1.0,
                cone,
                empty: false,
            },
            SetDescriptor::Oscillation { gamma, count } => {
                if *count == 0 {
                    return Err(domain("oscillation count must be at least 1"));
                }
                Reduced {
                    level: positive("gamma", *gamma)?,
                    horizon: 1.0,
                    cone: &ALL,
                    empty: *count >= 2,
                }
            }
        };
        r.cone.check_dim(dim)?;
        Ok(r)
    }

    /// Membership of a general path.
    ///
    /// Running suprema are checked at grid times and one-sided limits.
    pub fn contains(&self, x: &CadlagPath) -> Result<bool> {
        self.validate(x.dim())?;
        let hit = |v: &[f64], level: f64, cone: &DirectionPredicate| norm(v) > level && cone.contains(v);
        Ok(match self {
            SetDescriptor::SupNorm { level } => x.sup_norm() > *level,
            SetDescriptor::Endpoint { t, level, cone } => hit(&x.eval(*t), *level, cone),
            SetDescriptor::RunningSup { t, level, cone } => {
                let grid = x.grid();
                let mut buf = vec![0.0; x.dim()];
                let mut found = hit(&x.eval(*t), *level, cone);
                for i in 0..grid.len() {
                    if found || grid[i] > *t {
                        break;
                    }
                    x.pre(i, &mut buf);
                    found = hit(&buf, *level, cone);
                    if !found && grid[i] < *t {
                        x.post(i, &mut buf);
                        found = hit(&buf, *level, cone);
                    }
                }
                found
            }
            SetDescriptor::RadialCone { radius, cone } => hit(&x.eval(1.0), *radius, cone),
            SetDescriptor::Oscillation { gamma, count } => x.gamma_oscillation(*gamma)? >= *count,
        })
    }
}

/// Draws integrand paths for a replicate.
pub trait PathSampler: Sync {
    fn sample_path(&self, seed: u64, replicate: u64) -> CadlagPath;
}

impl PathSampler for CadlagPath {
    fn sample_path(&self, _seed: u64, _replicate: u64) -> CadlagPath {
        self.clone()
    }
}

/// Monte Carlo estimate of the Breiman constant `E|Y|^α`.
pub fn breiman_constant<S: ScalarSampler + ?Sized>(sampler: &S, alpha: f64, n_mc: u64, seed: u64) -> Result<Estimate> {
    if !(alpha > 0.0) {
        return Err(domain("alpha must be positive"));
    }
    if n_mc == 0 {
        return Err(domain("n_mc must be positive"));
    }
    let stats = par_fold(
        n_mc,
        MeanVar::default,
        |acc, rep| {
            let mut rng = stream_rng(seed, rep, Stream::Scalar);
            acc.push(sampler.sample(&mut rng).abs().powf(alpha));
        },
        MeanVar::merge,
    );
    Ok(stats.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::ScalarLaw;

    fn half_split(alpha: f64, c: f64) -> RegVarMeasure {
        RegVarMeasure::two_sided(alpha, c, 0.5).unwrap()
    }

    #[test]
    fn mu_tail_examples() {
        let m = RegVarMeasure::positive(2.0, 1.0).unwrap();
        assert_eq!(m.mu_tail(2.0, None).unwrap(), 0.25);
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        assert_eq!(m.mu_tail(1.0, None).unwrap(), 1.0);
        let m = half_split(2.0, 3.0);
        let v = m.mu_tail(10.0, Some(&DirectionPredicate::positive())).unwrap();
        assert!((v - 0.015).abs() < 1e-15);
        assert!(matches!(m.mu_tail(0.0, None), Err(Error::Domain(_))));
    }

    #[test]
    fn scaling_examples() {
        assert!((ScalingSequence::new(1.0, 1.0).unwrap().at(100) - 100.0).abs() < 1e-12);
        assert!((ScalingSequence::new(2.0, 1.0).unwrap().at(100) - 10.0).abs() < 1e-12);
        // 2000^(2/3) = 10 * 2^(1/3) * 10^(... ) evaluated independently
        let expect = (2000f64.ln() * 2.0 / 3.0).exp();
        let got = ScalingSequence::new(1.5, 2.0).unwrap().at(1000);
        assert!((got - expect).abs() < 1e-9);
        assert!((got - 158.74).abs() < 5e-3);
    }

    #[test]
    fn normalization() {
        let m = RegVarMeasure::positive(1.5, 2.0).unwrap();
        for n in [1u64, 10, 1_000_000] {
            let a = m.scaling().at(n);
            assert!((n as f64 * m.mu_tail(a, None).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn m_eval_examples() {
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        let sup = m.m_eval(&SetDescriptor::SupNorm { level: 2.0 }).unwrap();
        assert!((sup - 0.353_553_390_593_273_7).abs() < 1e-12);
        let end1 = m
            .m_eval(&SetDescriptor::Endpoint {
                t: 1.0,
                level: 2.0,
                cone: DirectionPredicate::positive(),
            })
            .unwrap();
        assert!((end1 - 2f64.powf(-1.5)).abs() < 1e-15);
        let end_half = m
            .m_eval(&SetDescriptor::Endpoint {
                t: 0.5,
                level: 2.0,
                cone: DirectionPredicate::positive(),
            })
            .unwrap();
        assert!((end_half - 0.5 * end1).abs() < 1e-15);
    }

    #[test]
    fn m_eval_rejects_bad_sets() {
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        assert!(m.m_eval(&SetDescriptor::SupNorm { level: 0.0 }).is_err());
        let cone = DirectionPredicate::HalfSpace { normal: vec![1.0, 0.0] };
        assert!(matches!(
            m.m_eval(&SetDescriptor::RadialCone { radius: 1.0, cone }),
            Err(Error::Unsupported(_))
        ));
        assert!(m.m_eval(&SetDescriptor::Oscillation { gamma: 1.0, count: 0 }).is_err());
        assert_eq!(m.m_eval(&SetDescriptor::Oscillation { gamma: 1.0, count: 2 }).unwrap(), 0.0);
    }

    #[test]
    fn endpoint_mass_is_linear_in_time() {
        let m = half_split(1.2, 0.7);
        let at = |t| {
            m.m_eval(&SetDescriptor::Endpoint {
                t,
                level: 1.5,
                cone: DirectionPredicate::positive(),
            })
            .unwrap()
        };
        let full = at(1.0);
        let mut prev = 0.0;
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!(at(t) >= prev);
            assert!((at(t) - t * full).abs() < 1e-15);
            prev = at(t);
        }
    }

    #[test]
    fn mstar_with_unit_integrand_matches_m() {
        let m = RegVarMeasure::new(
            1.3,
            2.0,
            vec![
                SpectralAtom { dir: vec![1.0, 0.0], w: 0.25 },
                SpectralAtom { dir: vec![0.6, 0.8], w: 0.5 },
                SpectralAtom { dir: vec![0.0, -1.0], w: 0.25 },
            ],
        )
        .unwrap();
        let ones = CadlagPath::constant(vec![1.0, 1.0]);
        let cap = DirectionPredicate::Cap {
            center: vec![1.0, 1.0],
            min_cos: 0.5,
        };
        let sets = [
            SetDescriptor::SupNorm { level: 3.0 },
            SetDescriptor::Endpoint { t: 0.4, level: 1.5, cone: cap.clone() },
            SetDescriptor::RunningSup {
                t: 0.9,
                level: 2.0,
                cone: DirectionPredicate::HalfSpace { normal: vec![0.0, 1.0] },
            },
            SetDescriptor::RadialCone { radius: 0.5, cone: cap },
            SetDescriptor::Oscillation { gamma: 2.0, count: 1 },
        ];
        for s in &sets {
            let exact = m.m_eval(s).unwrap();
            let est = m.mstar_eval(&ones, s, 64, 1).unwrap();
            assert!((est.mean - exact).abs() < 1e-12, "{s:?}");
            assert!(est.stderr < 1e-12);
        }
    }

    #[test]
    fn mstar_constant_scalar_integrand() {
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        let y = CadlagPath::constant(vec![3.0]);
        let set = SetDescriptor::Endpoint {
            t: 1.0,
            level: 4.0,
            cone: DirectionPredicate::positive(),
        };
        let est = m.mstar_eval(&y, &set, 10, 0).unwrap();
        assert!((est.mean - 3f64.powf(1.5) * 4f64.powf(-1.5)).abs() < 1e-14);
        assert!(m.mstar_eval(&y, &set, 0, 0).is_err());
        assert!(m.mstar_eval(&CadlagPath::zero(1), &set, 10, 0).is_err());
    }

    #[test]
    fn mstar_decaying_integrand() {
        // Y_s = e^{-s} held on a fine grid: ∫_0^1 e^{-1.5 s} ds (left-endpoint hold)
        let n = 4096;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let y = CadlagPath::from_fn(1, grid, |t| vec![(-t).exp()]).unwrap();
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        let set = SetDescriptor::RunningSup {
            t: 1.0,
            level: 10.0,
            cone: DirectionPredicate::positive(),
        };
        let est = m.mstar_eval(&y, &set, 4, 3).unwrap();
        let exact = (1.0 - (-1.5f64).exp()) / 1.5 * 10f64.powf(-1.5);
        assert!((est.mean - exact).abs() < 1e-9, "{}", est.mean);
        assert!((est.mean - 0.016377).abs() < 5e-6);
    }

    #[test]
    fn breiman_constant_examples() {
        let one = ScalarLaw::Constant { value: 1.0 };
        assert_eq!(breiman_constant(&one, 0.7, 100, 0).unwrap().mean, 1.0);
        let two = ScalarLaw::Constant { value: 2.0 };
        assert_eq!(breiman_constant(&two, 2.0, 100, 0).unwrap().mean, 4.0);
        let ln = ScalarLaw::LogNormal { mu: 0.0, sigma: 0.5 };
        let e = breiman_constant(&ln, 2.0, 200_000, 5).unwrap();
        assert!((e.mean - 0.5f64.exp()).abs() < 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn json_shape_and_validation() {
        let m = half_split(1.5, 0.1 + 0.2);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with("{\"alpha\":1.5,\"c\":"));
        let back: RegVarMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(back.intensity().to_bits(), m.intensity().to_bits());
        let bad = r#"{"alpha":1.5,"c":1,"spectral":[{"dir":[2.0],"w":0.5}]}"#;
        let err = serde_json::from_str::<RegVarMeasure>(bad).unwrap_err().to_string();
        assert!(err.contains("unit vector") && err.contains("sum to"), "{err}");
    }

    #[test]
    fn set_membership_on_paths() {
        let x = CadlagPath::step(vec![3.0], 0.6).unwrap();
        let pos = DirectionPredicate::positive();
        assert!(SetDescriptor::SupNorm { level: 2.0 }.contains(&x).unwrap());
        let end = |t| SetDescriptor::Endpoint { t, level: 2.0, cone: pos.clone() };
        assert!(!end(0.5).contains(&x).unwrap());
        assert!(end(0.6).contains(&x).unwrap());
        let run = SetDescriptor::RunningSup { t: 0.7, level: 2.0, cone: pos.clone() };
        assert!(run.contains(&x).unwrap());
        let neg = SetDescriptor::RadialCone {
            radius: 1.0,
            cone: DirectionPredicate::HalfSpace { normal: vec![-1.0] },
        };
        assert!(!neg.contains(&x).unwrap());
        assert!(SetDescriptor::Oscillation { gamma: 2.0, count: 1 }.contains(&x).unwrap());
    }
}
