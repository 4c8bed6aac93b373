//! Building càdlàg paths and evaluating the functionals used in the diagnostics.

use rvlevy::cadlag::{j1_match, CadlagPath, Continuity, Jump};

fn main() -> rvlevy::Result<()> {
    // a linear ramp plus jumps at 0.25 and 0.6
    let grid = vec![0.0, 0.25, 0.6, 1.0];
    let values = vec![0.0, 3.25, 1.6, 2.0];
    let jumps = vec![
        Jump { t: 0.25, size: vec![3.0] },
        Jump { t: 0.6, size: vec![-1.5] },
    ];
    let x = CadlagPath::from_flat(1, grid, values, jumps, Continuity::Right)?;

    println!("x(0.25-) = {:?}, x(0.25) = {:?}", x.left_limit(0.25), x.eval(0.25));
    println!("sup norm         = {}", x.sup_norm());
    println!("running max to .5 = {}", x.running_max(0.5, 0));
    println!("largest jump     = {:?}", x.largest_jump());
    println!("gamma-oscillations above 1: {}", x.gamma_oscillation(1.0)?);

    let one = x.one_step_approx();
    println!("one-step approximation: {:?}", one);
    println!("uniform distance to it: {}", x.uniform_distance(&one)?);

    let shifted = CadlagPath::step(vec![3.0], 0.3)?;
    let (d, lambda) = j1_match(&one, &shifted, 4)?;
    println!("J1 distance to a step at 0.3: {d:.4}, time change sends 0.3 to {:.4}", lambda.apply(0.3));

    print!("{}", x.to_csv());
    println!("{}", serde_json::to_string(&x).expect("path serializes"));
    Ok(())
}
