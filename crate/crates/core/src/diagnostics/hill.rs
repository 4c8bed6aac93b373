use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Hill estimate of the tail index from the `k` largest observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillEstimate {
    pub n: usize,
    pub k: usize,
    pub alpha_hat: f64,
    pub stderr: f64,
}

/// `1 / mean(log(X_(i) / X_(k+1)))` over the `k` largest order statistics.
pub fn hill(sample: &[f64], k: usize) -> Result<HillEstimate> {
    let n = sample.len();
    if k == 0 || k >= n {
        return Err(domain(format!("k must satisfy 1 <= k < n, got k = {k}, n = {n}")));
    }
    if sample.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(domain("Hill estimation needs positive finite values"));
    }
    let mut v = sample.to_vec();
    // descending order: v[..k] are the k largest, v[k] is X_(k+1)
    let (top, pivot, _) = v.select_nth_unstable_by(k, |a, b| b.partial_cmp(a).unwrap());
    let base = pivot.ln();
    let mean = top.iter().map(|x| x.ln() - base).sum::<f64>() / k as f64;
    if !(mean > 0.0) {
        return Err(domain("the top order statistics are tied; tail index undefined"));
    }
    let alpha_hat = 1.0 / mean;
    Ok(HillEstimate {
        n,
        k,
        alpha_hat,
        stderr: alpha_hat / (k as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::pareto;
    use crate::rng::{stream_rng, Stream};

    #[test]
    fn quantile_sequence() {
        let n = 100_000;
        let alpha = 2.0;
        let sample: Vec<f64> = (1..=n).map(|i| (n as f64 / i as f64).powf(1.0 / alpha)).collect();
        let h = hill(&sample, 1000).unwrap();
        assert!((h.alpha_hat - alpha).abs() < 0.01, "{h:?}");
    }

    #[test]
    fn constant_log_ratios() {
        // every top value is e^{1/α} times X_(k+1)
        let alpha: f64 = 1.7;
        let k = 10;
        let mut sample = vec![(1.0 / alpha).exp(); k];
        sample.extend(vec![1.0; 5]);
        let h = hill(&sample, k).unwrap();
        assert!((h.alpha_hat - alpha).abs() < 1e-12);
    }

    #[test]
    fn pareto_sample() {
        let mut rng = stream_rng(5, 0, Stream::Scalar);
        let sample: Vec<f64> = (0..100_000).map(|_| pareto(1.5, &mut rng)).collect();
        let h = hill(&sample, 1000).unwrap();
        assert!((h.alpha_hat - 1.5).abs() < 3.0 * h.stderr, "{h:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(hill(&[1.0, -2.0, 3.0], 1).is_err());
        assert!(hill(&[1.0, 2.0], 2).is_err());
        assert!(hill(&[1.0, 2.0], 0).is_err());
        assert!(hill(&[1.0, 1.0, 1.0], 1).is_err());
    }
}
