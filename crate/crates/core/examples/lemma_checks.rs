//! The maximal-product bound and the vanishing of multiple big jumps.

use rvlevy::diagnostics::{maximal_product_bound, multiple_jump_trend, CountLaw, WeightRule};
use rvlevy::laws::ScalarLaw;
use rvlevy::regvar::RegVarMeasure;

fn main() -> rvlevy::Result<()> {
    let z = ScalarLaw::Pareto { alpha: 1.5 };
    for rule in [WeightRule::Constant { value: 1.0 }, WeightRule::PastPower { exponent: 0.5 }] {
        let r = maximal_product_bound(CountLaw::Poisson { mean: 2.0 }, rule, &z, 500_000, 20.0, 1)?;
        println!(
            "{rule:?}: P(sum > x) = {:.4e}, P(N max > x) = {:.4e}, holds: {}",
            r.lhs.p_hat, r.rhs.p_hat, r.holds
        );
    }

    let mu = RegVarMeasure::positive(1.5, 1.0)?;
    for p in multiple_jump_trend(&mu, 1.0, 0.75, &[100, 1_000, 10_000, 100_000], 200_000, 2)? {
        println!(
            "n = {:>6}: n P(two big jumps) = {:.4e} (closed form {:.4e}) ± {:.1e}",
            p.n, p.estimate, p.closed_form, p.stderr
        );
    }
    Ok(())
}
