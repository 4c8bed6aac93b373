use serde::{Deserialize, Serialize};

use crate::diagnostics::scenario::Scenario;
use crate::error::{domain, Error, Result};
use crate::mc::{par_fold, ratio_with_stderr, Estimate};
use crate::regvar::{DirectionPredicate, PathSampler, RegVarMeasure, SetDescriptor};

/// Crude Monte Carlo exceedance probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub level: f64,
    pub n: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub stderr: f64,
}

impl TailEstimate {
    /// `None` when there are no trials.
    pub fn from_counts(level: f64, n: u64, hits: u64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        assert!(hits <= n, "hits exceed trials");
        let p_hat = hits as f64 / n as f64;
        Some(TailEstimate {
            level,
            n,
            hits,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        })
    }
}

/// A ratio of two exceedance probabilities estimated on shared replicates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub level: f64,
    pub n: u64,
    pub numerator_hits: u64,
    pub denominator_hits: u64,
    /// `None` when the denominator has no hits.
    pub ratio: Option<f64>,
    pub stderr: Option<f64>,
}

impl RatioPoint {
    pub(crate) fn from_counts(level: f64, n: u64, num: u64, den: u64, both: u64) -> Self {
        let r = ratio_with_stderr(n, num, den, both);
        RatioPoint {
            level,
            n,
            numerator_hits: num,
            denominator_hits: den,
            ratio: r.map(|(v, _)| v),
            stderr: r.map(|(_, s)| s),
        }
    }
}

pub(crate) fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(domain("levels must be nonempty"));
    }
    if levels.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
        return Err(domain("levels must be positive"));
    }
    if levels.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("levels must be strictly increasing"));
    }
    Ok(())
}

pub(crate) fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// `P(S > u)` for a scalar sampler `(seed, replicate) -> S`.
pub fn tail_prob<F>(sampler: F, u: f64, n: u64, seed: u64) -> Result<TailEstimate>
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    Ok(tail_probs(sampler, &[u], n, seed)?[0])
}

/// Exceedance probabilities at several levels from one set of draws.
pub fn tail_probs<F>(sampler: F, levels: &[f64], n: u64, seed: u64) -> Result<Vec<TailEstimate>>
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    check_levels(levels)?;
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let counts = par_fold(
        n,
        || vec![0u64; levels.len()],
        |acc, rep| {
            let s = sampler(seed, rep);
            for (c, &u) in acc.iter_mut().zip(levels) {
                *c += u64::from(s > u);
            }
        },
        add_counts,
    );
    Ok(levels
        .iter()
        .zip(counts)
        .map(|(&u, h)| TailEstimate::from_counts(u, n, h).expect("n > 0"))
        .collect())
}

fn require_scalar(s: &Scenario) -> Result<()> {
    if s.model().dim() != 1 {
        return Err(Error::Unsupported("this diagnostic is defined for one-dimensional models".into()));
    }
    Ok(())
}

/// `P(W_t > u)` at each level for `W = Y · X`.
pub fn integral_tail(scenario: &Scenario, t: f64, levels: &[f64], n: u64, seed: u64) -> Result<Vec<TailEstimate>> {
    require_scalar(scenario)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("t must lie in (0, 1]"));
    }
    tail_probs(|seed, rep| scenario.replicate(seed, rep).w.eval(t)[0], levels, n, seed)
}

/// `P(sup_{s ≤ t} W_s > u) / P(W_t > u)` on shared replicates.
pub fn tail_equivalence(scenario: &Scenario, t: f64, levels: &[f64], n: u64, seed: u64) -> Result<Vec<RatioPoint>> {
    require_scalar(scenario)?;
    check_levels(levels)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("t must lie in (0, 1]"));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let k = levels.len();
    let counts = par_fold(
        n,
        || vec![0u64; 2 * k],
        |acc, rep| {
            let w = scenario.replicate(seed, rep).w;
            let end = w.eval(t)[0];
            let sup = w.running_max(t, 0);
            for (i, &u) in levels.iter().enumerate() {
                acc[i] += u64::from(sup > u);
                acc[k + i] += u64::from(end > u);
            }
        },
        add_counts,
    );
    // the endpoint event is contained in the running-sup event
    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, &u)| RatioPoint::from_counts(u, n, counts[i], counts[k + i], counts[k + i]))
        .collect())
}

/// `σ(+) c u^{-α} ∫_0^t E(Y_s^α) ds` for a one-dimensional measure.
pub fn analytic_prediction<S: PathSampler + ?Sized>(
    measure: &RegVarMeasure,
    integrand: &S,
    t: f64,
    u: f64,
    n_mc: u64,
    seed: u64,
) -> Result<Estimate> {
    if measure.dim() != 1 {
        return Err(Error::Unsupported("analytic prediction needs a one-dimensional measure".into()));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(domain("t must lie in (0, 1]"));
    }
    if measure.spectral_mass(Some(&DirectionPredicate::positive()))? == 0.0 {
        return Err(domain("the measure has no mass on the positive half-line"));
    }
    let set = SetDescriptor::Endpoint {
        t,
        level: u,
        cone: DirectionPredicate::positive(),
    };
    measure.mstar_eval(integrand, &set, n_mc, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::pareto;
    use crate::levy_sim::{IntegrandSpec, LevyModel};
    use crate::rng::{stream_rng, Stream};

    #[test]
    fn degenerate_samplers() {
        let zero = tail_prob(|_, _| 0.0, 3.0, 1000, 0).unwrap();
        assert_eq!((zero.hits, zero.p_hat), (0, 0.0));
        let all = tail_prob(|_, _| 6.0, 3.0, 1000, 0).unwrap();
        assert_eq!((all.p_hat, all.stderr), (1.0, 0.0));
    }

    #[test]
    fn pareto_exceedance() {
        let e = tail_prob(
            |seed, rep| pareto(1.5, &mut stream_rng(seed, rep, Stream::Scalar)),
            4.0,
            1_000_000,
            21,
        )
        .unwrap();
        assert!((e.p_hat - 0.125).abs() < 3.0 * e.stderr, "{e:?}");
        assert_eq!(e.p_hat, e.hits as f64 / e.n as f64);
        assert_eq!(e.stderr, (e.p_hat * (1.0 - e.p_hat) / e.n as f64).sqrt());
    }

    #[test]
    fn level_validation() {
        assert!(tail_probs(|_, _| 0.0, &[], 10, 0).is_err());
        assert!(tail_probs(|_, _| 0.0, &[2.0, 1.0], 10, 0).is_err());
        assert!(tail_probs(|_, _| 0.0, &[1.0], 0, 0).is_err());
        assert!(TailEstimate::from_counts(1.0, 0, 0).is_none());
    }

    #[test]
    fn monotone_paths_have_unit_ratio() {
        // positive jumps, positive drift, no diffusion, positive integrand
        let model = LevyModel::one_sided(2.0, 1.5, 0.0, 0.3).unwrap();
        let s = Scenario::new(model, IntegrandSpec::constant(vec![1.5]), 32).unwrap();
        let pts = tail_equivalence(&s, 1.0, &[1.0, 3.0, 10.0], 20_000, 4).unwrap();
        for p in pts {
            assert_eq!(p.numerator_hits, p.denominator_hits);
            assert_eq!(p.ratio, Some(1.0));
        }
    }

    #[test]
    fn ratio_never_below_one() {
        let model = LevyModel::new(
            1.0,
            1.5,
            vec![
                crate::regvar::SpectralAtom { dir: vec![1.0], w: 0.5 },
                crate::regvar::SpectralAtom { dir: vec![-1.0], w: 0.5 },
            ],
            vec![vec![1.0]],
            vec![-0.5],
        )
        .unwrap();
        let s = Scenario::new(model, IntegrandSpec::constant(vec![1.0]), 32).unwrap();
        for p in tail_equivalence(&s, 0.7, &[0.5, 2.0, 8.0], 10_000, 8).unwrap() {
            assert!(p.numerator_hits >= p.denominator_hits);
            if let Some(r) = p.ratio {
                assert!(r >= 1.0);
            }
        }
    }

    #[test]
    fn analytic_prediction_examples() {
        let m = RegVarMeasure::positive(1.5, 1.0).unwrap();
        let ones = crate::cadlag::CadlagPath::constant(vec![1.0]);
        let full = analytic_prediction(&m, &ones, 1.0, 10.0, 10, 0).unwrap();
        assert!((full.mean - 10f64.powf(-1.5)).abs() < 1e-15);
        let half = analytic_prediction(&m, &ones, 0.5, 10.0, 10, 0).unwrap();
        assert!((half.mean - 0.5 * 10f64.powf(-1.5)).abs() < 1e-15);

        let spec = IntegrandSpec::Deterministic {
            curve: crate::levy_sim::Curve::Exp {
                scale: vec![1.0],
                rate: vec![-1.0],
            },
        };
        let sampler = crate::levy_sim::IntegrandSampler::new(spec, 4096).unwrap();
        let e = analytic_prediction(&m, &sampler, 1.0, 10.0, 2, 0).unwrap();
        // the held path lags the curve by one step: relative bias about 0.75/4096
        assert!((e.mean / 0.016377 - 1.0).abs() < 5e-4, "{}", e.mean);
    }
}
