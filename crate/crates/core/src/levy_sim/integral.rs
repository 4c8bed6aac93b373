use crate::cadlag::{merge_grids, CadlagPath, Continuity, Jump};
use crate::error::{check_dim, domain, Result};

/// `(Y · X)_t = ∫_0^t Y_s dX_s` on the merged grid.
///
/// Over each merged grid interval `(g_j, g_{j+1}]` the continuous increment of
/// `x` is weighted by the right limit `y_{g_j+}` (left-endpoint rule) and a
/// jump `Z` of `x` at `g_{j+1}` is weighted by the left limit `y_{g_{j+1}-}`.
/// For the predictable hold paths produced by [`IntegrandSpec`] both weights
/// are the held value and the sum is exact.
///
/// [`IntegrandSpec`]: crate::levy_sim::IntegrandSpec
pub fn stochastic_integral(y: &CadlagPath, x: &CadlagPath) -> Result<CadlagPath> {
    check_dim(x.dim(), y.dim())?;
    if x.continuity() != Continuity::Right {
        return Err(domain("the integrator must be càdlàg"));
    }
    let d = x.dim();
    let grid = merge_grids(y.grid(), x.grid());
    let mut values = Vec::with_capacity(grid.len() * d);
    let mut jumps = Vec::with_capacity(x.jumps().len());
    let mut w = vec![0.0; d];
    let (mut y_post, mut y_pre, mut x_post, mut x_pre) = (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    values.extend_from_slice(&w);
    let (mut ys, mut xs) = (y.sweep(), x.sweep());
    ys.right(0.0, &mut y_post);
    xs.right(0.0, &mut x_post);
    for &t in &grid[1..] {
        xs.left(t, &mut x_pre);
        for k in 0..d {
            w[k] += y_post[k] * (x_pre[k] - x_post[k]);
        }
        if let Some(j) = xs.jump(t) {
            ys.left(t, &mut y_pre);
            let size: Vec<f64> = (0..d).map(|k| y_pre[k] * j.size[k]).collect();
            for k in 0..d {
                w[k] += size[k];
            }
            jumps.push(Jump { t, size });
        }
        values.extend_from_slice(&w);
        ys.right(t, &mut y_post);
        xs.right(t, &mut x_post);
    }
    CadlagPath::from_flat(d, grid, values, jumps, Continuity::Right)
}

/// `Y_τ ΔX_τ 1_[τ, 1]` with `τ` the largest-jump time of `x` and `Y_τ` the
/// left limit; the zero path when `x` has no jumps.
pub fn one_jump_integral(y: &CadlagPath, x: &CadlagPath) -> Result<CadlagPath> {
    check_dim(x.dim(), y.dim())?;
    match x.largest_jump() {
        None => Ok(CadlagPath::zero(x.dim())),
        Some(j) => {
            let held = y.left_limit(j.t);
            CadlagPath::step(held.iter().zip(&j.size).map(|(a, b)| a * b).collect(), j.t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy_sim::{IntegrandSpec, LevyModel, SimConfig};
    use crate::levy_sim::integrand::hold_path;

    fn sample_x(seed: u64) -> CadlagPath {
        LevyModel::one_sided(3.0, 1.5, 0.7, 0.1)
            .unwrap()
            .simulate(&SimConfig::new(64, seed, 0))
            .unwrap()
    }

    #[test]
    fn unit_integrand_reproduces_x() {
        let x = sample_x(4);
        let ones = IntegrandSpec::constant(vec![1.0]).simulate(&SimConfig::new(64, 0, 0)).unwrap();
        let w = stochastic_integral(&ones, &x).unwrap();
        assert_eq!(w.jumps(), x.jumps());
        assert_eq!(w.grid(), x.grid());
        for i in 0..x.grid().len() {
            assert!((w.value(i)[0] - x.value(i)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_jump_against_deterministic_integrand() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let samples: Vec<f64> = grid.iter().map(|t| 1.0 + t).collect();
        let y = hold_path(1, grid, &samples).unwrap();
        let x = CadlagPath::step(vec![2.0], 0.35).unwrap();
        let w = stochastic_integral(&y, &x).unwrap();
        // held value on (0.3, 0.4] is y(0.3) = 1.3
        let expect = CadlagPath::step(vec![2.6], 0.35).unwrap();
        assert!(w.uniform_distance(&expect).unwrap() < 1e-15);
        assert_eq!(w.jumps()[0].size, vec![1.3 * 2.0]);
        assert_eq!(one_jump_integral(&y, &x).unwrap(), expect);
    }

    #[test]
    fn drift_against_linear_integrand() {
        let n = 1000;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let y = hold_path(1, grid.clone(), &grid).unwrap();
        let x = CadlagPath::from_fn(1, grid, |t| vec![t]).unwrap();
        let w = stochastic_integral(&y, &x).unwrap();
        assert!((w.eval(1.0)[0] - 0.5).abs() < 1e-3);
    }

    #[test]
    fn one_jump_examples() {
        let x = sample_x(9);
        let ones = CadlagPath::constant(vec![1.0]);
        assert_eq!(one_jump_integral(&ones, &x).unwrap(), x.one_step_approx());

        let y = CadlagPath::constant(vec![2.0, 3.0]);
        let x = CadlagPath::from_flat(
            2,
            vec![0.0, 0.2, 0.7, 1.0],
            vec![0.0, 0.0, 3.0, 3.0, 8.0, 8.0, 8.0, 8.0],
            vec![
                Jump { t: 0.2, size: vec![3.0, 3.0] },
                Jump { t: 0.7, size: vec![5.0, 5.0] },
            ],
            Continuity::Right,
        )
        .unwrap();
        assert_eq!(
            one_jump_integral(&y, &x).unwrap(),
            CadlagPath::step(vec![10.0, 15.0], 0.7).unwrap()
        );
        assert_eq!(
            one_jump_integral(&y, &CadlagPath::zero(2)).unwrap(),
            CadlagPath::zero(2)
        );
        assert!(stochastic_integral(&CadlagPath::zero(1), &x).is_err());
    }

    #[test]
    fn predictability_of_jump_weights() {
        let x = sample_x(12);
        let grid: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0).collect();
        let base: Vec<f64> = grid.iter().map(|t| 1.0 + t * t).collect();
        let y1 = hold_path(1, grid.clone(), &base).unwrap();
        let w1 = stochastic_integral(&y1, &x).unwrap();
        for j in x.jumps() {
            // change every sample from the jump time onward
            let bumped: Vec<f64> = grid
                .iter()
                .zip(&base)
                .map(|(&t, &v)| if t >= j.t { v + 10.0 } else { v })
                .collect();
            let y2 = hold_path(1, grid.clone(), &bumped).unwrap();
            let w2 = stochastic_integral(&y2, &x).unwrap();
            let a = w1.jumps().iter().find(|k| k.t == j.t).unwrap();
            let b = w2.jumps().iter().find(|k| k.t == j.t).unwrap();
            assert_eq!(a.size, b.size);
        }
    }
}
