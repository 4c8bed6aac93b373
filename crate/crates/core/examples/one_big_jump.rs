//! Given a large excursion, how often is the path far (in J1) from its
//! single-largest-jump approximation?

use rvlevy::diagnostics::{one_big_jump_curve, Scenario};
use rvlevy::levy_sim::{IntegrandSpec, LevyModel};

fn main() -> rvlevy::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let model = LevyModel::one_sided(0.5, 1.5, 0.5, 0.0)?;
    let spec = IntegrandSpec::ExpOu { rate: 1.0, vol_of_vol: 0.5, initial: vec![1.0], long_run: None };
    let scenario = Scenario::new(model, spec, 128)?;
    let report = one_big_jump_curve(&scenario, 0.1, &[5.0, 10.0, 20.0, 40.0, 80.0], n, 7, 8)?;
    for (name, curve) in report.curves() {
        println!("{name} (slope vs log u: {:?})", curve.slope());
        for e in curve.conditional_probs.iter().flatten() {
            println!("  u = {:>4}: {:.4} ± {:.4} over {} conditioning hits", e.level, e.p_hat, e.stderr, e.n);
        }
    }
    Ok(())
}
