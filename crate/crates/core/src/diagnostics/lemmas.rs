use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::diagnostics::tail::TailEstimate;
use crate::error::{domain, Result};
use crate::laws::ScalarSampler;
use crate::mc::{par_fold, MeanVar};
use crate::regvar::RegVarMeasure;
use crate::rng::{stream_rng, SimRng, Stream};

/// Law of the number of summands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CountLaw {
    Poisson { mean: f64 },
    Fixed { count: u64 },
}

impl CountLaw {
    fn validate(&self) -> Result<()> {
        match *self {
            CountLaw::Poisson { mean } if !(mean >= 0.0 && mean.is_finite()) => {
                Err(domain("Poisson mean must be nonnegative"))
            }
            _ => Ok(()),
        }
    }

    fn sample(&self, rng: &mut SimRng) -> u64 {
        match *self {
            CountLaw::Fixed { count } => count,
            CountLaw::Poisson { mean } => Poisson::new(mean).map_or(0, |p| p.sample(rng) as u64),
        }
    }
}

/// How the weight `Y_k` is built from `Z_1, ..., Z_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WeightRule {
    Constant { value: f64 },
    /// `Y_1 = 1`, `Y_k = Z_{k-1}^exponent`.
    PastPower { exponent: f64 },
}

impl WeightRule {
    fn weight(&self, previous: Option<f64>) -> f64 {
        match (*self, previous) {
            (WeightRule::Constant { value }, _) => value,
            (WeightRule::PastPower { .. }, None) => 1.0,
            (WeightRule::PastPower { exponent }, Some(z)) => {
                if z > 0.0 {
                    z.powf(exponent)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Both sides of the maximal-product bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalProductBound {
    /// `P(Σ_{k ≤ N} Y_k Z_k > x)`.
    pub lhs: TailEstimate,
    /// `P(N max_{k ≤ N} Y_k Z̃_k > x)` with `Z̃` an independent copy.
    pub rhs: TailEstimate,
    /// `2 rhs + 3 sqrt(se_lhs² + 4 se_rhs²)`.
    pub bound: f64,
    pub holds: bool,
}

/// Monte Carlo check of `P(Σ Y_k Z_k > x) ≤ 2 P(N max Y_k Z̃_k > x)`.
///
/// `N` and the weights are shared by both sides; the weights are built from
/// the original `Z` sequence only.
pub fn maximal_product_bound<S: ScalarSampler + ?Sized>(
    count: CountLaw,
    weights: WeightRule,
    z: &S,
    n_trials: u64,
    x_level: f64,
    seed: u64,
) -> Result<MaximalProductBound> {
    count.validate()?;
    if n_trials == 0 {
        return Err(domain("n_trials must be positive"));
    }
    if !(x_level > 0.0) {
        return Err(domain("x must be positive"));
    }
    let [l, r] = par_fold(
        n_trials,
        || [0u64; 2],
        |acc, rep| {
            let mut main = stream_rng(seed, rep, Stream::Scalar);
            let mut copy = stream_rng(seed, rep, Stream::Decoupled);
            let n = count.sample(&mut main);
            let (mut sum, mut max) = (0.0f64, 0.0f64);
            let mut prev = None;
            for _ in 0..n {
                let y = weights.weight(prev);
                let zk = z.sample(&mut main);
                let zt = z.sample(&mut copy);
                sum += y * zk;
                max = max.max(y * zt);
                prev = Some(zk);
            }
            acc[0] += u64::from(sum > x_level);
            acc[1] += u64::from(n as f64 * max > x_level);
        },
        |a, b| [a[0] + b[0], a[1] + b[1]],
    );
    let lhs = TailEstimate::from_counts(x_level, n_trials, l).expect("n > 0");
    let rhs = TailEstimate::from_counts(x_level, n_trials, r).expect("n > 0");
    let bound = 2.0 * rhs.p_hat + 3.0 * (lhs.stderr.powi(2) + 4.0 * rhs.stderr.powi(2)).sqrt();
    Ok(MaximalProductBound {
        lhs,
        rhs,
        bound,
        holds: lhs.p_hat <= bound,
    })
}

/// `n P(M_n ≥ 2)` at one `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipleJumpPoint {
    pub n: u64,
    /// `P(|Z| > a(n)^β)`.
    pub p_n: f64,
    pub closed_form: f64,
    pub estimate: f64,
    pub stderr: f64,
}

/// `P(Poisson(μ) ≥ 2) = 1 - (1 + μ) e^{-μ}` without cancellation.
fn poisson_at_least_two(mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    -(-mu).exp_m1() - mu * (-mu).exp()
}

/// `P(Binomial(N, p) ≥ 2)` without cancellation.
fn binomial_at_least_two(count: u64, p: f64) -> f64 {
    if count < 2 || p == 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let s = (count - 1) as f64 * (-p).ln_1p();
    -s.exp_m1() - s.exp() * (count - 1) as f64 * p
}

/// Decay of `n P(M_n ≥ 2)`, where `M_n` counts jumps above `a(n)^β` among
/// `N ~ Poisson(λ)` Pareto jumps.
///
/// The Monte Carlo estimate draws `N` and averages the exact conditional
/// probability `P(M_n ≥ 2 | N)`.
pub fn multiple_jump_trend(
    measure: &RegVarMeasure,
    lambda: f64,
    beta: f64,
    n_values: &[u64],
    reps: u64,
    seed: u64,
) -> Result<Vec<MultipleJumpPoint>> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(domain("beta must lie in (1/2, 1)"));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(domain("lambda must be nonnegative"));
    }
    if reps == 0 || n_values.contains(&0) {
        return Err(domain("reps and every n must be positive"));
    }
    let seq = measure.scaling();
    let law = CountLaw::Poisson { mean: lambda };
    Ok(n_values
        .iter()
        .map(|&n| {
            let p_n = seq.at(n).powf(-measure.alpha() * beta).min(1.0);
            let nf = n as f64;
            let stats = par_fold(
                reps,
                MeanVar::default,
                |acc, rep| {
                    let count = law.sample(&mut stream_rng(seed, rep, Stream::Jumps));
                    acc.push(nf * binomial_at_least_two(count, p_n));
                },
                MeanVar::merge,
            );
            MultipleJumpPoint {
                n,
                p_n,
                closed_form: nf * poisson_at_least_two(lambda * p_n),
                estimate: stats.mean,
                stderr: stats.stderr(),
            }
        })
        .collect())
}
