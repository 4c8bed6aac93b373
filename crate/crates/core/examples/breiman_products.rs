//! P(Y X > u) / P(X > u) for Pareto X and an independent multiplier Y.

use rvlevy::diagnostics::breiman_ratio;
use rvlevy::laws::ScalarLaw;

fn main() -> rvlevy::Result<()> {
    let alpha = 2.0;
    let levels = [2.0, 5.0, 10.0, 20.0, 40.0];
    for law in [ScalarLaw::Constant { value: 2.0 }, ScalarLaw::LogNormal { mu: 0.0, sigma: 0.5 }] {
        println!("{law:?}: E Y^alpha = {:?}", law.moment(alpha));
        for p in breiman_ratio(alpha, &law, &levels, 2_000_000, 3)? {
            println!("  u = {:>4}: {:?} ± {:?}", p.level, p.ratio, p.stderr);
        }
    }
    Ok(())
}
