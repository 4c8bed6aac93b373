//! Simulating a Lévy path, a volatility integrand and their stochastic integral.

use rvlevy::levy_sim::{stochastic_integral, threshold_jumps, IntegrandSpec, LevyModel, SimConfig, DEFAULT_BETA};

fn main() -> rvlevy::Result<()> {
    let model = LevyModel::one_sided(5.0, 1.5, 0.5, 0.0)?;
    let spec = IntegrandSpec::ExpOu { rate: 2.0, vol_of_vol: 0.6, initial: vec![1.0], long_run: None };
    let cfg = SimConfig::new(1024, 42, 0);

    let x = model.simulate(&cfg)?;
    let y = spec.simulate(&cfg)?;
    let w = stochastic_integral(&y, &x)?;

    println!("{} jumps in X:", x.jumps().len());
    for j in x.jumps() {
        println!("  t = {:.4}, size = {:.3}, Y held at {:.3}", j.t, j.size[0], y.left_limit(j.t)[0]);
    }
    println!("X_1 = {:.4}, W_1 = {:.4}, sup|W| = {:.4}", x.eval(1.0)[0], w.eval(1.0)[0], w.sup_norm());

    let split = threshold_jumps(x.jumps(), 1000, DEFAULT_BETA, &model.scaling())?;
    println!("jumps above a(1000)^beta = {:.2}: {}", split.threshold, split.count());

    // replicates are reproducible from (seed, replicate index)
    assert_eq!(model.simulate(&cfg)?, x);
    Ok(())
}
