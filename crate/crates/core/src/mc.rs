//! Deterministic parallel Monte Carlo plumbing.
//!
//! Replicates are processed in fixed-size chunks. Chunks run in parallel,
//! but partial results are merged sequentially in chunk order, so floating
//! point aggregates are bit-identical for any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Replicates per work unit.
pub const CHUNK: u64 = 2048;

/// Fold `step` over replicate indices `0..n` and merge the chunk partials in order.
pub fn par_fold<A, I, F, M>(n: u64, init: I, step: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let end = ((c + 1) * CHUNK).min(n);
            for r in c * CHUNK..end {
                step(&mut acc, r);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(init(), merge)
}

/// Streaming mean and variance with an associative merge.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanVar {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: MeanVar) -> MeanVar {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        MeanVar { n, mean, m2 }
    }

    /// Unbiased sample variance; zero with fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl From<MeanVar> for Estimate {
    fn from(m: MeanVar) -> Self {
        Estimate {
            mean: m.mean,
            stderr: m.stderr(),
            n: m.n,
        }
    }
}

/// Delta-method ratio `P(A)/P(B)` estimated from shared replicates.
///
/// `both` counts replicates where both events occurred. Returns `None` when
/// the denominator has no hits.
pub fn ratio_with_stderr(n: u64, num: u64, den: u64, both: u64) -> Option<(f64, f64)> {
    if den == 0 || n == 0 {
        return None;
    }
    let nf = n as f64;
    let pa = num as f64 / nf;
    let pb = den as f64 / nf;
    let pab = both as f64 / nf;
    let ratio = num as f64 / den as f64;
    let var_a = pa * (1.0 - pa);
    let var_b = pb * (1.0 - pb);
    let cov = pab - pa * pb;
    let var = (var_a / (pb * pb) - 2.0 * pa * cov / (pb * pb * pb) + pa * pa * var_b / (pb * pb * pb * pb)) / nf;
    Some((ratio, var.max(0.0).sqrt()))
}
