//! Recovering the tail index from the largest jumps of simulated paths.

use rvlevy::diagnostics::hill;
use rvlevy::levy_sim::{LevyModel, SimConfig};

fn main() -> rvlevy::Result<()> {
    let model = LevyModel::one_sided(20.0, 1.5, 0.0, 0.0)?;
    let sizes: Vec<f64> = (0..5_000)
        .flat_map(|rep| model.simulate_big_jumps(&SimConfig::new(2, 11, rep)))
        .map(|j| j.size[0])
        .collect();
    for k in [100, 500, 2000] {
        let h = hill(&sizes, k)?;
        println!("n = {}, k = {k}: alpha_hat = {:.3} ± {:.3}", h.n, h.alpha_hat, h.stderr);
    }
    Ok(())
}
