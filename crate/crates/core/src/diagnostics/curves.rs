use serde::{Deserialize, Serialize};

use crate::cadlag::{j1_exceeds, CadlagPath};
use crate::diagnostics::scenario::Scenario;
use crate::diagnostics::tail::{add_counts, check_levels, TailEstimate};
use crate::error::{domain, Result};
use crate::levy_sim::one_jump_integral;
use crate::mc::par_fold;

/// Conditional probabilities `P(d(W/u, W'/u) > ε | E_u)` across levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDistanceCurve {
    pub epsilon: f64,
    pub levels: Vec<f64>,
    /// `None` where the conditioning event had no hits.
    pub conditional_probs: Vec<Option<TailEstimate>>,
}

impl ConditionalDistanceCurve {
    /// Least-squares slope of the defined estimates against `log u`.
    pub fn slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .levels
            .iter()
            .zip(&self.conditional_probs)
            .filter_map(|(&u, e)| e.map(|e| (u.ln(), e.p_hat)))
            .collect();
        least_squares_slope(&pts)
    }

    /// The estimate at the largest level with at least `min_hits` conditioning hits.
    pub fn at_largest_supported(&self, min_hits: u64) -> Option<TailEstimate> {
        self.conditional_probs
            .iter()
            .rev()
            .flatten()
            .find(|e| e.n >= min_hits)
            .copied()
    }

    /// Whether the defined estimates never increase by more than `k` combined stderr.
    pub fn nonincreasing_within(&self, k: f64) -> bool {
        let defined: Vec<&TailEstimate> = self.conditional_probs.iter().flatten().collect();
        defined
            .windows(2)
            .all(|w| w[1].p_hat <= w[0].p_hat + k * w[0].stderr.hypot(w[1].stderr))
    }
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Distances between a path and its one-jump approximation, on all three
/// conditioning events, from one replicate pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneBigJumpReport {
    pub n: u64,
    /// `W = Y · X` against `Y_τ ΔX_τ 1_[τ,1]`, given `|W|_∞ > u`.
    pub integral_sup: ConditionalDistanceCurve,
    /// The same distance, given `|Y_τ ΔX_τ| > u`.
    pub integral_jump: ConditionalDistanceCurve,
    /// `X` against `ΔX_τ 1_[τ,1]`, given `|X|_∞ > u`.
    pub levy_sup: ConditionalDistanceCurve,
}

impl OneBigJumpReport {
    pub fn curves(&self) -> [(&'static str, &ConditionalDistanceCurve); 3] {
        [
            ("integral_sup", &self.integral_sup),
            ("integral_jump", &self.integral_jump),
            ("levy_sup", &self.levy_sup),
        ]
    }
}

/// Whether `d(a/u, b/u) > ε`, given their uniform distance.
fn far_apart(a: &CadlagPath, b: &CadlagPath, uniform: f64, u: f64, eps: f64, refinement: usize) -> bool {
    if uniform / u <= eps {
        return false;
    }
    let s = 1.0 / u;
    j1_exceeds(&a.scale(s), &b.scale(s), eps, refinement).expect("same dimension")
}

/// Conditional J1 curves for the one-big-jump approximation.
///
/// Every level reuses the same replicates. For each replicate the J1
/// distance is computed only at levels where a conditioning event occurs and
/// the uniform distance does not already settle the comparison.
pub fn one_big_jump_curve(
    scenario: &Scenario,
    epsilon: f64,
    levels: &[f64],
    n: u64,
    seed: u64,
    refinement: usize,
) -> Result<OneBigJumpReport> {
    if !(epsilon > 0.0) {
        return Err(domain("epsilon must be positive"));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    check_levels(levels)?;
    let k = levels.len();
    let lowest = levels[0];
    // layout: [cond_w, hit_w, cond_j, hit_j, cond_x, hit_x] per level
    let counts = par_fold(
        n,
        || vec![0u64; 6 * k],
        |acc, rep| {
            let r = scenario.replicate(seed, rep);
            let approx = one_jump_integral(&r.y, &r.x).expect("dimensions checked");
            let x_approx = r.x.one_step_approx();
            let w_sup = r.w.sup_norm();
            let j_sup = approx.sup_norm();
            let x_sup = r.x.sup_norm();
            if w_sup <= lowest && j_sup <= lowest && x_sup <= lowest {
                return;
            }
            let w_gap = r.w.uniform_distance(&approx).expect("same dimension");
            let x_gap = r.x.uniform_distance(&x_approx).expect("same dimension");
            for (i, &u) in levels.iter().enumerate() {
                let mut w_far = None;
                let mut far = || *w_far.get_or_insert_with(|| far_apart(&r.w, &approx, w_gap, u, epsilon, refinement));
                if w_sup > u {
                    acc[6 * i] += 1;
                    acc[6 * i + 1] += u64::from(far());
                }
                if j_sup > u {
                    acc[6 * i + 2] += 1;
                    acc[6 * i + 3] += u64::from(far());
                }
                if x_sup > u {
                    acc[6 * i + 4] += 1;
                    acc[6 * i + 5] += u64::from(far_apart(&r.x, &x_approx, x_gap, u, epsilon, refinement));
                }
            }
        },
        add_counts,
    );
    let curve = |slot: usize| ConditionalDistanceCurve {
        epsilon,
        levels: levels.to_vec(),
        conditional_probs: (0..k)
            .map(|i| TailEstimate::from_counts(levels[i], counts[6 * i + slot], counts[6 * i + slot + 1]))
            .collect(),
    };
    Ok(OneBigJumpReport {
        n,
        integral_sup: curve(0),
        integral_jump: curve(2),
        levy_sup: curve(4),
    })
}
