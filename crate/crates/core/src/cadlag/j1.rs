//! Skorokhod J1 distance between paths.
//!
//! `d(x, y) = inf_λ max(sup_t |λ(t) - t|, sup_t |x(λ(t)) - y(t)|)` over
//! increasing bijections λ of `[0, 1]`. The infimum is searched over
//! piecewise-linear λ whose breakpoints pair candidate times of `x` with
//! candidate times of `y`. Candidates are 0, 1, the jump times of both paths
//! and optional dyadic points. The search is a minimax shortest path over
//! the monotone pairs.

use std::cmp::Ordering;

use crate::cadlag::path::{norm, CadlagPath};
use crate::error::{check_dim, Error, Result};

/// A strictly increasing piecewise-linear bijection of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    breakpoints: Vec<f64>,
    images: Vec<f64>,
}

impl TimeChange {
    pub fn new(breakpoints: Vec<f64>, images: Vec<f64>) -> Result<Self> {
        let ok = breakpoints.len() == images.len()
            && breakpoints.len() >= 2
            && breakpoints[0] == 0.0
            && images[0] == 0.0
            && *breakpoints.last().unwrap() == 1.0
            && *images.last().unwrap() == 1.0
            && breakpoints.windows(2).all(|w| w[0] < w[1])
            && images.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::Invalid {
                what: "time change",
                reason: "breakpoints and images must be strictly increasing from 0 to 1".into(),
            });
        }
        Ok(TimeChange { breakpoints, images })
    }

    pub fn identity() -> Self {
        TimeChange {
            breakpoints: vec![0.0, 1.0],
            images: vec![0.0, 1.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn images(&self) -> &[f64] {
        &self.images
    }

    pub fn apply(&self, t: f64) -> f64 {
        interp(&self.breakpoints, &self.images, t)
    }

    pub fn inverse(&self) -> TimeChange {
        TimeChange {
            breakpoints: self.images.clone(),
            images: self.breakpoints.clone(),
        }
    }

    /// `sup_t |λ(t) - t|`, attained at a breakpoint.
    pub fn distortion(&self) -> f64 {
        self.breakpoints
            .iter()
            .zip(&self.images)
            .map(|(b, i)| (b - i).abs())
            .fold(0.0, f64::max)
    }
}

fn interp(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let k = xs.partition_point(|&x| x <= t);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return *ys.last().unwrap();
    }
    let (x0, x1, y0, y1) = (xs[k - 1], xs[k], ys[k - 1], ys[k]);
    y0 + (t - x0) * (y1 - y0) / (x1 - x0)
}

/// J1 distance upper bound; see [`j1_match`].
pub fn j1_distance(x: &CadlagPath, y: &CadlagPath, refinement: usize) -> Result<f64> {
    j1_match(x, y, refinement).map(|(d, _)| d)
}

/// J1 distance upper bound together with the time change attaining it.
///
/// `refinement` adds that many dyadic points (1/2, 1/4, 3/4, 1/8, ...) to the
/// candidate set. The identity is always in the search family, so the result
/// never exceeds the uniform distance.
pub fn j1_match(x: &CadlagPath, y: &CadlagPath, refinement: usize) -> Result<(f64, TimeChange)> {
    check_dim(x.dim(), y.dim())?;
    let cand = candidates(x, y, refinement);
    let (d, pairs) = search(x, y, &cand, f64::INFINITY).expect("identity edge always fits");
    let lambda = TimeChange::new(
        pairs.iter().map(|&(_, k)| cand[k]).collect(),
        pairs.iter().map(|&(i, _)| cand[i]).collect(),
    )?;
    Ok((d, lambda))
}

/// Whether the distance bound from [`j1_distance`] exceeds `epsilon`.
///
/// Cheaper than computing the distance: time-change nodes displaced by at
/// least `epsilon` are never explored.
pub fn j1_exceeds(x: &CadlagPath, y: &CadlagPath, epsilon: f64, refinement: usize) -> Result<bool> {
    check_dim(x.dim(), y.dim())?;
    let cand = candidates(x, y, refinement);
    let cap = epsilon + f64::EPSILON * epsilon.abs().max(1.0);
    Ok(match search(x, y, &cand, cap) {
        Some((d, _)) => d > epsilon,
        None => true,
    })
}

/// Minimax DP over matched candidate pairs. Only values below `cap` are
/// reported; returns the best value and its node chain.
fn search(x: &CadlagPath, y: &CadlagPath, cand: &[f64], cap: f64) -> Option<(f64, Vec<(usize, usize)>)> {
    let m = cand.len();
    let seg = Segments { x, y, cand };

    let end = m - 1;
    let idx = |i: usize, k: usize| i * m + k;
    let mut best = vec![f64::INFINITY; m * m];
    let mut from = vec![usize::MAX; m * m];
    best[idx(0, 0)] = 0.0;
    if let Some(upper) = seg.cost(0, 0, end, end, cap) {
        best[idx(end, end)] = upper;
        from[idx(end, end)] = idx(0, 0);
    }
    let bound = |best: &[f64]| best[idx(end, end)].min(cap);

    let interior: Vec<(usize, usize)> = (1..end)
        .flat_map(|i| (1..end).map(move |k| (i, k)))
        .filter(|&(i, k)| (cand[i] - cand[k]).abs() < cap)
        .collect();

    for &(i, k) in interior.iter().chain(std::iter::once(&(end, end))) {
        let here = idx(i, k);
        if (cand[i] - cand[k]).abs() >= bound(&best) {
            continue;
        }
        let preds = std::iter::once((0, 0)).chain(
            interior
                .iter()
                .copied()
                .filter(|&(pi, pk)| pi < i && pk < k),
        );
        for (pi, pk) in preds {
            let p = idx(pi, pk);
            let cutoff = best[here].min(bound(&best));
            if best[p] >= cutoff {
                continue;
            }
            if (pi, pk) == (0, 0) && (i, k) == (end, end) {
                continue;
            }
            if let Some(c) = seg.cost(pi, pk, i, k, cutoff) {
                let v = best[p].max(c);
                if v < best[here] {
                    best[here] = v;
                    from[here] = p;
                }
            }
        }
    }

    if from[idx(end, end)] == usize::MAX {
        return None;
    }
    let mut pairs = vec![(end, end)];
    let mut cur = idx(end, end);
    while cur != idx(0, 0) {
        cur = from[cur];
        pairs.push((cur / m, cur % m));
    }
    pairs.reverse();
    Some((best[idx(end, end)], pairs))
}

fn candidates(x: &CadlagPath, y: &CadlagPath, refinement: usize) -> Vec<f64> {
    let mut c = vec![0.0, 1.0];
    c.extend(x.jumps().iter().map(|j| j.t));
    c.extend(y.jumps().iter().map(|j| j.t));
    let mut level = 1u32;
    let mut added = 0;
    'outer: while added < refinement {
        let denom = (1u64 << level) as f64;
        for num in (1..(1u64 << level)).step_by(2) {
            if added == refinement {
                break 'outer;
            }
            c.push(num as f64 / denom);
            added += 1;
        }
        level += 1;
    }
    c.sort_by(|a, b| a.partial_cmp(b).unwrap());
    c.dedup();
    c
}

/// Where to evaluate a path: at a stored grid index, or at an arbitrary time.
#[derive(Clone, Copy)]
enum At {
    Index(usize),
    Time(f64),
}

fn limits(p: &CadlagPath, at: At, pre: &mut [f64], post: &mut [f64]) {
    match at {
        At::Index(i) => {
            p.pre(i, pre);
            p.post(i, post);
        }
        At::Time(t) => {
            p.left_limit_into(t, pre);
            p.right_limit_into(t, post);
        }
    }
}

fn at_time(p: &CadlagPath, t: f64) -> At {
    match p
        .grid()
        .binary_search_by(|g| g.partial_cmp(&t).unwrap_or(Ordering::Less))
    {
        Ok(i) => At::Index(i),
        Err(_) => At::Time(t),
    }
}

struct Segments<'a> {
    x: &'a CadlagPath,
    y: &'a CadlagPath,
    cand: &'a [f64],
}

/// Points closer than this (after mapping) are treated as one instant.
const COINCIDE: f64 = 1e-12;

impl Segments<'_> {
    /// Cost of the linear piece sending `[cand[k0], cand[k1]]` (y-time) onto
    /// `[cand[i0], cand[i1]]` (x-time). Returns `None` once the running value
    /// reaches `cutoff`.
    fn cost(&self, i0: usize, k0: usize, i1: usize, k1: usize, cutoff: f64) -> Option<f64> {
        let (a0, a1, b0, b1) = (self.cand[i0], self.cand[i1], self.cand[k0], self.cand[k1]);
        let mut worst = (a1 - b1).abs();
        if worst >= cutoff {
            return None;
        }
        let d = self.x.dim();
        let mut buf = Buffers::new(d);
        let last = i1 == self.cand.len() - 1;

        // left end: right limits only
        buf.load(self.x, at_time(self.x, a0), self.y, at_time(self.y, b0));
        worst = worst.max(buf.post_gap());

        let xg = self.x.grid();
        let yg = self.y.grid();
        let (mut ix, x_end) = (
            xg.partition_point(|&s| s <= a0),
            xg.partition_point(|&s| s < a1),
        );
        let (mut iy, y_end) = (
            yg.partition_point(|&q| q <= b0),
            yg.partition_point(|&q| q < b1),
        );
        let to_y = |s: f64| b0 + (s - a0) * (b1 - b0) / (a1 - a0);
        let to_x = |q: f64| a0 + (q - b0) * (a1 - a0) / (b1 - b0);

        while ix < x_end || iy < y_end {
            if worst >= cutoff {
                return None;
            }
            let qx = if ix < x_end { to_y(xg[ix]) } else { f64::INFINITY };
            let qy = if iy < y_end { yg[iy] } else { f64::INFINITY };
            if (qx - qy).abs() <= COINCIDE {
                buf.load(self.x, At::Index(ix), self.y, At::Index(iy));
                ix += 1;
                iy += 1;
            } else if qx < qy {
                buf.load(self.x, At::Index(ix), self.y, at_time(self.y, qx));
                ix += 1;
            } else {
                buf.load(self.x, at_time(self.x, to_x(qy)), self.y, At::Index(iy));
                iy += 1;
            }
            worst = worst.max(buf.pre_gap()).max(buf.post_gap());
        }

        // right end: left limits, plus the terminal value
        buf.load(self.x, at_time(self.x, a1), self.y, at_time(self.y, b1));
        worst = worst.max(buf.pre_gap());
        if last {
            worst = worst.max(buf.post_gap());
        }
        (worst < cutoff).then_some(worst)
    }
}

struct Buffers {
    xpre: Vec<f64>,
    xpost: Vec<f64>,
    ypre: Vec<f64>,
    ypost: Vec<f64>,
    diff: Vec<f64>,
}

impl Buffers {
    fn new(d: usize) -> Self {
        Buffers {
            xpre: vec![0.0; d],
            xpost: vec![0.0; d],
            ypre: vec![0.0; d],
            ypost: vec![0.0; d],
            diff: vec![0.0; d],
        }
    }

    fn load(&mut self, x: &CadlagPath, ax: At, y: &CadlagPath, ay: At) {
        limits(x, ax, &mut self.xpre, &mut self.xpost);
        limits(y, ay, &mut self.ypre, &mut self.ypost);
    }

    fn pre_gap(&mut self) -> f64 {
        for k in 0..self.diff.len() {
            self.diff[k] = self.xpre[k] - self.ypre[k];
        }
        norm(&self.diff)
    }

    fn post_gap(&mut self) -> f64 {
        for k in 0..self.diff.len() {
            self.diff[k] = self.xpost[k] - self.ypost[k];
        }
        norm(&self.diff)
    }
}
