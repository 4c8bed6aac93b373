use proptest::prelude::*;
use rvlevy::cadlag::{j1_distance, CadlagPath, Continuity, Jump};
use rvlevy::levy_sim::{stochastic_integral, IntegrandSpec, LevyModel, SimConfig};

/// Step functions with jumps on the 1/100 grid.
fn step_path() -> impl Strategy<Value = CadlagPath> {
    (
        -1.0f64..1.0,
        prop::collection::btree_map(1u32..100, -2.0f64..2.0, 0..4),
    )
        .prop_map(|(start, jumps)| {
            let mut grid = vec![0.0];
            let mut values = vec![start];
            let mut list = Vec::new();
            let mut level = start;
            for (tick, size) in jumps {
                let t = f64::from(tick) / 100.0;
                level += size;
                grid.push(t);
                values.push(level);
                list.push(Jump { t, size: vec![size] });
            }
            grid.push(1.0);
            values.push(level);
            CadlagPath::from_flat(1, grid, values, list, Continuity::Right).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn j1_is_a_metric_on_step_functions(x in step_path(), y in step_path(), z in step_path()) {
        let dxy = j1_distance(&x, &y, 2).unwrap();
        let dyx = j1_distance(&y, &x, 2).unwrap();
        let dyz = j1_distance(&y, &z, 2).unwrap();
        let dxz = j1_distance(&x, &z, 2).unwrap();
        prop_assert!((dxy - dyx).abs() <= 1e-9);
        prop_assert!(dxz <= dxy + dyz + 1e-6);
        prop_assert!(dxy <= x.uniform_distance(&y).unwrap());
        let one = x.one_step_approx();
        prop_assert_eq!(one.one_step_approx(), one.clone());
        if !x.jumps().is_empty() {
            prop_assert_eq!(one.largest_jump_time(), x.largest_jump_time());
        }
    }

    #[test]
    fn integral_is_linear_in_the_integrand(seed in 0u64..1000, a in 0.1f64..3.0, b in 0.1f64..3.0) {
        let cfg = SimConfig::new(64, seed, 0);
        let x = LevyModel::one_sided(2.0, 1.5, 0.5, 0.1).unwrap().simulate(&cfg).unwrap();
        let spec = IntegrandSpec::ExpOu { rate: 1.0, vol_of_vol: 0.4, initial: vec![1.0], long_run: None };
        let y = spec.simulate(&cfg).unwrap();
        let combined = stochastic_integral(&y.scale(a), &x).unwrap();
        let parts = stochastic_integral(&y, &x).unwrap().scale(a + b).sub(&stochastic_integral(&y.scale(b), &x).unwrap()).unwrap();
        prop_assert!(combined.uniform_distance(&parts).unwrap() <= 1e-9 * (1.0 + combined.sup_norm()));
        // the same seed reproduces the same path
        prop_assert_eq!(LevyModel::one_sided(2.0, 1.5, 0.5, 0.1).unwrap().simulate(&cfg).unwrap(), x);
    }
}
