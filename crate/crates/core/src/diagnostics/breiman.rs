use crate::diagnostics::tail::{add_counts, check_levels, RatioPoint};
use crate::error::{domain, Result};
use crate::laws::{pareto, ScalarSampler};
use crate::mc::par_fold;
use crate::rng::{stream_rng, Stream};

/// `P(Y X > u) / P(X > u)` for exact Pareto(α) `X` and independent `Y`.
///
/// Both events are counted on the same `X` draws.
pub fn breiman_ratio<S: ScalarSampler + ?Sized>(
    alpha: f64,
    y: &S,
    levels: &[f64],
    n: u64,
    seed: u64,
) -> Result<Vec<RatioPoint>> {
    if !(alpha > 0.0) {
        return Err(domain("alpha must be positive"));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    check_levels(levels)?;
    let k = levels.len();
    let counts = par_fold(
        n,
        || vec![0u64; 3 * k],
        |acc, rep| {
            let x = pareto(alpha, &mut stream_rng(seed, rep, Stream::Jumps));
            let yx = y.sample(&mut stream_rng(seed, rep, Stream::Scalar)) * x;
            for (i, &u) in levels.iter().enumerate() {
                let (a, b) = (yx > u, x > u);
                acc[i] += u64::from(a);
                acc[k + i] += u64::from(b);
                acc[2 * k + i] += u64::from(a && b);
            }
        },
        add_counts,
    );
    Ok(levels
        .iter()
        .enumerate()
        .map(|(i, &u)| RatioPoint::from_counts(u, n, counts[i], counts[k + i], counts[2 * k + i]))
        .collect())
}
