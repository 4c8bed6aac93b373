//! Closed-form masses of the limit measures and their scaling.

use std::f64::consts::FRAC_1_SQRT_2;

use rvlevy::laws::ScalarLaw;
use rvlevy::levy_sim::{Curve, IntegrandSampler, IntegrandSpec};
use rvlevy::regvar::{breiman_constant, DirectionPredicate, RegVarMeasure, SetDescriptor, SpectralAtom};

fn main() -> rvlevy::Result<()> {
    // a two-dimensional measure with three spectral atoms
    let mu = RegVarMeasure::new(
        1.5,
        2.0,
        vec![
            SpectralAtom { dir: vec![1.0, 0.0], w: 0.5 },
            SpectralAtom { dir: vec![0.0, 1.0], w: 0.3 },
            SpectralAtom { dir: vec![-FRAC_1_SQRT_2, -FRAC_1_SQRT_2], w: 0.2 },
        ],
    )?;
    let cone = DirectionPredicate::Cap { center: vec![1.0, 1.0], min_cos: 0.0 };
    println!("sigma(cone)        = {}", mu.spectral_mass(Some(&cone))?);
    for r in [1.0, 2.0, 10.0] {
        println!("mu(|x| > {r:>4}, cone) = {:.6}", mu.mu_tail(r, Some(&cone))?);
    }

    let set = SetDescriptor::RadialCone { radius: 1.0, cone };
    for u in [0.5, 2.0, 10.0] {
        let lhs = mu.m_eval(&set.scaled(u))?;
        let rhs = u.powf(-mu.alpha()) * mu.m_eval(&set)?;
        println!("m(uA) = {lhs:.6e}, u^-alpha m(A) = {rhs:.6e} at u = {u}");
    }

    // the path-space limit m*(B) for the integrand e^{-s}
    let one_d = RegVarMeasure::positive(1.5, 1.0)?;
    let y = IntegrandSampler::new(
        IntegrandSpec::Deterministic { curve: Curve::Exp { scale: vec![1.0], rate: vec![-1.0] } },
        4096,
    )?;
    let endpoint = SetDescriptor::Endpoint { t: 1.0, level: 1.0, cone: DirectionPredicate::positive() };
    let e = one_d.mstar_eval(&y, &endpoint, 1, 0)?;
    println!("m*(W_1 > 1) = {:.5}", e.mean);

    let seq = one_d.scaling();
    println!("a(n) at n = 10^4: {:.2}", seq.at(10_000));

    let k = breiman_constant(&ScalarLaw::LogNormal { mu: 0.0, sigma: 0.5 }, 2.0, 1_000_000, 1)?;
    println!("E Y^2 for lognormal(0, 0.5): {:.4} ± {:.4} (exact {:.4})", k.mean, k.stderr, 0.5f64.exp());
    Ok(())
}
