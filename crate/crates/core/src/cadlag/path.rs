use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, domain, Error, Result};

/// Which one-sided limit a path takes at its discontinuities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Continuity {
    /// càdlàg: the value at a jump time is the right limit. A jump at `t`
    /// records `x_t - x_{t-}`.
    #[default]
    Right,
    /// càglàd: the value at a jump time is the left limit. A jump at `t`
    /// records `x_{t+} - x_t`.
    Left,
}

/// A discontinuity of a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub t: f64,
    pub size: Vec<f64>,
}

impl Jump {
    pub fn norm(&self) -> f64 {
        norm(&self.size)
    }
}

/// A path on `[0, 1]` with values in `R^d`.
///
/// The path is stored as values at the grid times plus an explicit list of
/// jumps, each located at a grid time. Between consecutive grid times the
/// path moves linearly from the right limit at the left end to the left limit
/// at the right end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct CadlagPath {
    dim: usize,
    grid: Vec<f64>,
    values: Vec<f64>,
    jumps: Vec<Jump>,
    jump_index: Vec<usize>,
    continuity: Continuity,
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    d: usize,
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
    jumps: Vec<Jump>,
    #[serde(default, skip_serializing_if = "is_right")]
    continuity: Continuity,
}

fn is_right(c: &Continuity) -> bool {
    *c == Continuity::Right
}

impl TryFrom<PathRepr> for CadlagPath {
    type Error = Error;
    fn try_from(r: PathRepr) -> Result<Self> {
        let mut flat = Vec::with_capacity(r.values.len() * r.d);
        for v in &r.values {
            check_dim(r.d, v.len())?;
            flat.extend_from_slice(v);
        }
        CadlagPath::from_flat(r.d, r.grid, flat, r.jumps, r.continuity)
    }
}

impl From<CadlagPath> for PathRepr {
    fn from(p: CadlagPath) -> Self {
        PathRepr {
            d: p.dim,
            values: p.values.chunks(p.dim).map(<[f64]>::to_vec).collect(),
            grid: p.grid,
            jumps: p.jumps,
            continuity: p.continuity,
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn invalid(reason: impl Into<String>) -> Error {
    Error::Invalid {
        what: "path",
        reason: reason.into(),
    }
}

/// Sorted union of two sorted time grids, exact duplicates removed.
pub(crate) fn merge_grids(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => match x.partial_cmp(&y).unwrap_or(Ordering::Equal) {
                Ordering::Less => {
                    i += 1;
                    x
                }
                Ordering::Greater => {
                    j += 1;
                    y
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    x
                }
            },
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

impl CadlagPath {
    /// Build a path from nested values, one `d`-vector per grid time.
    pub fn new(dim: usize, grid: Vec<f64>, values: Vec<Vec<f64>>, jumps: Vec<Jump>) -> Result<Self> {
        let mut flat = Vec::with_capacity(values.len() * dim);
        for v in &values {
            check_dim(dim, v.len())?;
            flat.extend_from_slice(v);
        }
        Self::from_flat(dim, grid, flat, jumps, Continuity::Right)
    }

    /// Build a path from row-major values and check every structural invariant.
    pub fn from_flat(
        dim: usize,
        grid: Vec<f64>,
        values: Vec<f64>,
        mut jumps: Vec<Jump>,
        continuity: Continuity,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if grid.len() < 2 {
            return Err(invalid("grid needs at least the times 0 and 1"));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
            return Err(invalid("grid must start at 0 and end at 1"));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("grid must be strictly increasing"));
        }
        if values.len() != grid.len() * dim {
            return Err(invalid(format!(
                "expected {} values for {} grid times in dimension {dim}, got {}",
                grid.len() * dim,
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("values must be finite"));
        }
        jumps.retain(|j| j.size.iter().any(|&s| s != 0.0));
        let mut jump_index = Vec::with_capacity(jumps.len());
        let mut cursor = 0;
        for (k, j) in jumps.iter().enumerate() {
            check_dim(dim, j.size.len())?;
            if j.size.iter().any(|s| !s.is_finite()) {
                return Err(invalid("jump sizes must be finite"));
            }
            let allowed = match continuity {
                Continuity::Right => j.t > 0.0 && j.t <= 1.0,
                Continuity::Left => j.t >= 0.0 && j.t < 1.0,
            };
            if !allowed {
                return Err(invalid(format!("jump time {} outside the admissible range", j.t)));
            }
            if k > 0 && !(jumps[k - 1].t < j.t) {
                return Err(invalid("jump times must be distinct and sorted"));
            }
            // jump times are sorted, so the grid cursor only moves forward
            cursor += grid[cursor..].partition_point(|&g| g < j.t);
            if grid.get(cursor) != Some(&j.t) {
                return Err(invalid(format!("jump time {} is not a grid time", j.t)));
            }
            jump_index.push(cursor);
        }
        Ok(CadlagPath {
            dim,
            grid,
            values,
            jumps,
            jump_index,
            continuity,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(vec![0.0; dim])
    }

    pub fn constant(value: Vec<f64>) -> Self {
        let dim = value.len();
        let mut values = value.clone();
        values.extend_from_slice(&value);
        CadlagPath {
            dim,
            grid: vec![0.0, 1.0],
            values,
            jumps: Vec::new(),
            jump_index: Vec::new(),
            continuity: Continuity::Right,
        }
    }

    /// The one-step function `z 1_[v, 1]`. For `v = 0` this is the constant `z`.
    pub fn step(z: Vec<f64>, v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(domain(format!("step time {v} outside [0, 1]")));
        }
        let dim = z.len();
        if v == 0.0 {
            return Ok(Self::constant(z));
        }
        let zeros = vec![0.0; dim];
        let (grid, values) = if v == 1.0 {
            (vec![0.0, 1.0], [zeros.as_slice(), &z].concat())
        } else {
            (vec![0.0, v, 1.0], [zeros.as_slice(), &z, &z].concat())
        };
        Self::from_flat(dim, grid, values, vec![Jump { t: v, size: z }], Continuity::Right)
    }

    /// Sample a continuous function on the given grid.
    pub fn from_fn(dim: usize, grid: Vec<f64>, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len() * dim);
        for &t in &grid {
            let v = f(t);
            check_dim(dim, v.len())?;
            values.extend(v);
        }
        Self::from_flat(dim, grid, values, Vec::new(), Continuity::Right)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    /// Stored value at grid index `i`.
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Jump recorded at grid index `i`, if any.
    pub fn jump_at_index(&self, i: usize) -> Option<&Jump> {
        self.jump_index
            .binary_search(&i)
            .ok()
            .map(|k| &self.jumps[k])
    }

    /// Right limit at grid index `i`.
    pub fn post(&self, i: usize, out: &mut [f64]) {
        out.copy_from_slice(self.value(i));
        if self.continuity == Continuity::Left {
            if let Some(j) = self.jump_at_index(i) {
                out.iter_mut().zip(&j.size).for_each(|(o, s)| *o += s);
            }
        }
    }

    /// Left limit at grid index `i`.
    pub fn pre(&self, i: usize, out: &mut [f64]) {
        out.copy_from_slice(self.value(i));
        if self.continuity == Continuity::Right {
            if let Some(j) = self.jump_at_index(i) {
                out.iter_mut().zip(&j.size).for_each(|(o, s)| *o -= s);
            }
        }
    }

    fn locate(&self, t: f64) -> std::result::Result<usize, usize> {
        self.grid
            .binary_search_by(|g| g.partial_cmp(&t).unwrap_or(Ordering::Less))
    }

    fn interpolate(&self, i: usize, t: f64, out: &mut [f64]) {
        // t lies strictly between grid[i] and grid[i + 1]
        let d = self.dim;
        let w = (t - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        let a = &self.values[i * d..(i + 1) * d];
        let b = &self.values[(i + 1) * d..(i + 2) * d];
        let (a_shift, b_shift) = match self.continuity {
            Continuity::Left => (self.jump_at_index(i), None),
            Continuity::Right => (None, self.jump_at_index(i + 1)),
        };
        for k in 0..d {
            let lo = a[k] + a_shift.map_or(0.0, |j| j.size[k]);
            let hi = b[k] - b_shift.map_or(0.0, |j| j.size[k]);
            out[k] = lo + w * (hi - lo);
        }
    }

    /// Cursor for evaluating limits at nondecreasing times in linear total time.
    pub(crate) fn sweep(&self) -> Sweep<'_> {
        Sweep { path: self, idx: 0 }
    }

    fn eval_side(&self, t: f64, out: &mut [f64], left: bool) {
        let t = t.clamp(0.0, 1.0);
        match self.locate(t) {
            Ok(i) => {
                if left {
                    self.pre(i, out)
                } else {
                    self.post(i, out)
                }
            }
            Err(i) => self.interpolate(i - 1, t, out),
        }
    }

    /// Left limit `x_{t-}` (equal to `x_0` at `t = 0`).
    pub fn left_limit_into(&self, t: f64, out: &mut [f64]) {
        self.eval_side(t, out, true)
    }

    /// Right limit `x_{t+}`.
    pub fn right_limit_into(&self, t: f64, out: &mut [f64]) {
        self.eval_side(t, out, false)
    }

    pub fn left_limit(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.left_limit_into(t, &mut out);
        out
    }

    pub fn right_limit(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.right_limit_into(t, &mut out);
        out
    }

    /// The value `x_t` under the path's continuity convention.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        match self.continuity {
            Continuity::Right => self.right_limit(t),
            Continuity::Left => self.left_limit(t),
        }
    }

    /// `|x|_inf = sup_t |x_t|`, Euclidean norm, over values and one-sided limits.
    pub fn sup_norm(&self) -> f64 {
        let mut buf = vec![0.0; self.dim];
        let mut best = 0.0f64;
        for i in 0..self.grid.len() {
            best = best.max(norm(self.value(i)));
        }
        for &i in &self.jump_index {
            self.pre(i, &mut buf);
            best = best.max(norm(&buf));
            self.post(i, &mut buf);
            best = best.max(norm(&buf));
        }
        best
    }

    /// `sup_{s ≤ t} x^{(k)}_s`, including left limits at jump times up to `t`.
    pub fn running_max(&self, t: f64, k: usize) -> f64 {
        let d = self.dim;
        let mut best = self.eval(t)[k];
        let end = self.grid.partition_point(|&g| g <= t);
        for i in 0..end {
            let v = self.values[i * d + k];
            if v > best {
                best = v;
            }
        }
        let mut buf = vec![0.0; d];
        for &i in self.jump_index.iter().take_while(|&&i| i < end) {
            self.pre(i, &mut buf);
            best = best.max(buf[k]);
            if self.grid[i] < t {
                self.post(i, &mut buf);
                best = best.max(buf[k]);
            }
        }
        best
    }

    /// Sup norm of each coordinate separately.
    pub fn component_sup(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.dim];
        let mut buf = vec![0.0; self.dim];
        let mut visit = |v: &[f64]| {
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.max(x.abs());
            }
        };
        for i in 0..self.grid.len() {
            visit(self.value(i));
        }
        for &i in &self.jump_index {
            self.pre(i, &mut buf);
            visit(&buf);
            self.post(i, &mut buf);
            visit(&buf);
        }
        out
    }

    /// The first jump attaining the largest jump norm.
    pub fn largest_jump(&self) -> Option<&Jump> {
        let mut best: Option<(&Jump, f64)> = None;
        for j in &self.jumps {
            let n = j.norm();
            if best.is_none_or(|(_, b)| n > b) {
                best = Some((j, n));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Time of the first jump with the largest norm; 1 when there are no jumps.
    pub fn largest_jump_time(&self) -> f64 {
        self.largest_jump().map_or(1.0, |j| j.t)
    }

    /// `Δx_τ 1_[τ, 1]` with `τ` the largest-jump time; the zero path without jumps.
    pub fn one_step_approx(&self) -> CadlagPath {
        match self.largest_jump() {
            Some(j) if self.continuity == Continuity::Right => {
                CadlagPath::step(j.size.clone(), j.t).expect("jump time lies in (0, 1]")
            }
            _ => CadlagPath::zero(self.dim),
        }
    }

    /// Candidate (time-ordered) values for oscillation counting: each grid
    /// value, preceded by the left limit when a jump sits at that time.
    fn ordered_states(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.grid.len() + self.jumps.len());
        let mut buf = vec![0.0; self.dim];
        for i in 0..self.grid.len() {
            if self.jump_at_index(i).is_some() {
                self.pre(i, &mut buf);
                out.push(buf.clone());
                self.post(i, &mut buf);
                out.push(buf.clone());
            } else {
                out.push(self.value(i).to_vec());
            }
        }
        out
    }

    /// Largest `p` such that the path has γ-oscillation `p` times: there are
    /// times `t_0 < ... < t_p` with `|x_{t_i} - x_{t_{i-1}}| > γ`.
    ///
    /// Candidate times are the grid times and the instants just before each
    /// jump. The maximum is found exactly by dynamic programming over chains.
    pub fn gamma_oscillation(&self, gamma: f64) -> Result<usize> {
        if !(gamma > 0.0) {
            return Err(domain("gamma must be positive"));
        }
        let states = self.ordered_states();
        let mut chain = vec![0usize; states.len()];
        let mut best = 0;
        let mut diff = vec![0.0; self.dim];
        for j in 1..states.len() {
            for i in 0..j {
                if chain[i] + 1 <= chain[j] {
                    continue;
                }
                for k in 0..self.dim {
                    diff[k] = states[j][k] - states[i][k];
                }
                if norm(&diff) > gamma {
                    chain[j] = chain[i] + 1;
                }
            }
            best = best.max(chain[j]);
        }
        Ok(best)
    }

    /// `u · x`.
    pub fn scale(&self, u: f64) -> CadlagPath {
        let mut p = self.clone();
        p.values.iter_mut().for_each(|v| *v *= u);
        for j in &mut p.jumps {
            j.size.iter_mut().for_each(|s| *s *= u);
        }
        p.jumps.retain(|j| j.size.iter().any(|&s| s != 0.0));
        p.jump_index = p
            .jumps
            .iter()
            .map(|j| p.grid.binary_search_by(|g| g.partial_cmp(&j.t).unwrap()).unwrap())
            .collect();
        p
    }

    /// Pointwise `x + y` on the merged grid (both paths càdlàg).
    pub fn add(&self, other: &CadlagPath) -> Result<CadlagPath> {
        self.combine(other, 1.0)
    }

    /// Pointwise `x - y` on the merged grid (both paths càdlàg).
    pub fn sub(&self, other: &CadlagPath) -> Result<CadlagPath> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &CadlagPath, sign: f64) -> Result<CadlagPath> {
        check_dim(self.dim, other.dim)?;
        if self.continuity != Continuity::Right || other.continuity != Continuity::Right {
            return Err(domain("path sums are defined for càdlàg paths"));
        }
        let grid = merge_grids(&self.grid, &other.grid);
        let d = self.dim;
        let mut values = Vec::with_capacity(grid.len() * d);
        let mut a = vec![0.0; d];
        let mut b = vec![0.0; d];
        for &t in &grid {
            self.right_limit_into(t, &mut a);
            other.right_limit_into(t, &mut b);
            values.extend(a.iter().zip(&b).map(|(x, y)| x + sign * y));
        }
        let mut jumps = Vec::new();
        let (mut i, mut k) = (0, 0);
        while i < self.jumps.len() || k < other.jumps.len() {
            let ti = self.jumps.get(i).map_or(f64::INFINITY, |j| j.t);
            let tk = other.jumps.get(k).map_or(f64::INFINITY, |j| j.t);
            if ti < tk {
                jumps.push(self.jumps[i].clone());
                i += 1;
            } else if tk < ti {
                let j = &other.jumps[k];
                jumps.push(Jump {
                    t: j.t,
                    size: j.size.iter().map(|s| sign * s).collect(),
                });
                k += 1;
            } else {
                let size = self.jumps[i]
                    .size
                    .iter()
                    .zip(&other.jumps[k].size)
                    .map(|(x, y)| x + sign * y)
                    .collect();
                jumps.push(Jump { t: ti, size });
                i += 1;
                k += 1;
            }
        }
        CadlagPath::from_flat(d, grid, values, jumps, Continuity::Right)
    }

    /// `sup_t |x_t - y_t|` over the merged grid, including one-sided limits.
    pub fn uniform_distance(&self, other: &CadlagPath) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        let grid = merge_grids(&self.grid, &other.grid);
        let d = self.dim;
        let (mut a, mut b, mut diff) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        let mut best = 0.0f64;
        let (mut sa, mut sb) = (self.sweep(), other.sweep());
        for &t in &grid {
            for left in [true, false] {
                if left {
                    sa.left(t, &mut a);
                    sb.left(t, &mut b);
                } else {
                    sa.right(t, &mut a);
                    sb.right(t, &mut b);
                }
                for k in 0..d {
                    diff[k] = a[k] - b[k];
                }
                best = best.max(norm(&diff));
            }
        }
        Ok(best)
    }

    /// Componentwise product `y x` on the merged grid.
    ///
    /// `self` plays the role of `y` and may be càdlàg or càglàd; the result is
    /// càdlàg with values `y_{t+} x_t` and jumps
    /// `y_{t+} Δx_t + (y_{t+} - y_{t-}) x_{t-}`.
    pub fn cw_product(&self, x: &CadlagPath) -> Result<CadlagPath> {
        check_dim(self.dim, x.dim)?;
        if x.continuity != Continuity::Right {
            return Err(domain("the second factor must be càdlàg"));
        }
        let grid = merge_grids(&self.grid, &x.grid);
        let d = self.dim;
        let mut values = Vec::with_capacity(grid.len() * d);
        let mut jumps = Vec::new();
        let (mut y_post, mut y_pre, mut x_post, mut x_pre) =
            (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
        for &t in &grid {
            self.right_limit_into(t, &mut y_post);
            x.right_limit_into(t, &mut x_post);
            values.extend(y_post.iter().zip(&x_post).map(|(a, b)| a * b));
            if t == 0.0 {
                continue;
            }
            let xj = x.jump_at_time(t);
            let yj = self.jump_at_time(t);
            if xj.is_none() && yj.is_none() {
                continue;
            }
            x.left_limit_into(t, &mut x_pre);
            let mut size = vec![0.0; d];
            if let Some(j) = xj {
                for k in 0..d {
                    size[k] += y_post[k] * j.size[k];
                }
            }
            if yj.is_some() {
                self.left_limit_into(t, &mut y_pre);
                for k in 0..d {
                    size[k] += (y_post[k] - y_pre[k]) * x_pre[k];
                }
            }
            jumps.push(Jump { t, size });
        }
        CadlagPath::from_flat(d, grid, values, jumps, Continuity::Right)
    }

    pub(crate) fn jump_at_time(&self, t: f64) -> Option<&Jump> {
        self.jumps
            .binary_search_by(|j| j.t.partial_cmp(&t).unwrap_or(Ordering::Less))
            .ok()
            .map(|k| &self.jumps[k])
    }

    /// CSV with a header row and one row per grid time.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for k in 1..=self.dim {
            let _ = write!(s, ",x{k}");
        }
        s.push('\n');
        for (i, t) in self.grid.iter().enumerate() {
            let _ = write!(s, "{t}");
            for v in self.value(i) {
                let _ = write!(s, ",{v}");
            }
            s.push('\n');
        }
        s
    }
}

pub(crate) struct Sweep<'a> {
    path: &'a CadlagPath,
    idx: usize,
}

impl Sweep<'_> {
    fn advance(&mut self, t: f64) -> bool {
        let g = &self.path.grid;
        while self.idx + 1 < g.len() && g[self.idx + 1] <= t {
            self.idx += 1;
        }
        g[self.idx] == t
    }

    pub(crate) fn left(&mut self, t: f64, out: &mut [f64]) {
        let t = t.clamp(0.0, 1.0);
        if self.advance(t) {
            self.path.pre(self.idx, out)
        } else {
            self.path.interpolate(self.idx, t, out)
        }
    }

    pub(crate) fn right(&mut self, t: f64, out: &mut [f64]) {
        let t = t.clamp(0.0, 1.0);
        if self.advance(t) {
            self.path.post(self.idx, out)
        } else {
            self.path.interpolate(self.idx, t, out)
        }
    }

    /// The jump at grid time `t`, if `t` is a grid time.
    pub(crate) fn jump(&mut self, t: f64) -> Option<&Jump> {
        if self.advance(t) {
            self.path.jump_at_index(self.idx)
        } else {
            None
        }
    }
}
