//! Tail of W_1 for the integrand e^{-s} against the analytic prediction, and
//! the ratio of running-sup to endpoint tails.

use rvlevy::diagnostics::{analytic_prediction, integral_tail, tail_equivalence, Scenario};
use rvlevy::levy_sim::{Curve, IntegrandSampler, IntegrandSpec, LevyModel};

fn main() -> rvlevy::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let spec = IntegrandSpec::Deterministic { curve: Curve::Exp { scale: vec![1.0], rate: vec![-1.0] } };
    let model = LevyModel::one_sided(1.0, 1.5, 0.0, 0.0)?;
    let scenario = Scenario::new(model.clone(), spec.clone(), 256)?;
    let levels = [5.0, 10.0, 20.0];

    let sampler = IntegrandSampler::new(spec.clone(), 4096)?;
    println!("{:>6} {:>12} {:>12} {:>8}", "u", "P(W_1 > u)", "prediction", "ratio");
    for e in integral_tail(&scenario, 1.0, &levels, n, 1)? {
        let a = analytic_prediction(&model.measure(), &sampler, 1.0, e.level, 1, 0)?;
        println!("{:>6} {:>12.4e} {:>12.4e} {:>8.3}", e.level, e.p_hat, a.mean, e.p_hat / a.mean);
    }

    let noisy = Scenario::new(LevyModel::one_sided(1.0, 1.5, 1.0, 0.0)?, spec, 256)?;
    println!("\nrunning sup / endpoint:");
    for p in tail_equivalence(&noisy, 1.0, &levels, n, 2)? {
        println!("  u = {:>4}: {:?} ± {:?} ({} endpoint hits)", p.level, p.ratio, p.stderr, p.denominator_hits);
    }
    Ok(())
}
