//! Dynamic-programming approximation of the optimal reparameterization
//! `inf_rho int |q0 - sqrt(rho') q1 o rho|^2 dt`.

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::quat::Quat;
use crate::registration::actions::{apply_warp, Warp};
use crate::registration::DPConfig;

/// Greatest common divisor.
fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lattice steps `(a, b)` with `1 <= a, b <= window` and `gcd(a, b) = 1`;
/// other steps are compositions of these and never needed.
fn steps(window: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 1..=window {
        for b in 1..=window {
            if gcd(a, b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Pointwise cost `|x - y|^2`.
fn framed_gap(x: Quat, y: Quat) -> f64 {
    (x - y).norm_sq()
}

/// Pointwise cost minimized over the twist of `y`:
/// `|x|^2 + |y|^2 - 2 |<x, y>_{C^2}|`.
fn twist_free_gap(x: Quat, y: Quat) -> f64 {
    let (z0, w0) = x.to_complex_pair();
    let (z1, w1) = y.to_complex_pair();
    let c = z0 * z1.conj() + w0 * w1.conj();
    (x.norm_sq() + y.norm_sq() - 2.0 * c.norm()).max(0.0)
}

/// Trapezoid integral over `a` grid steps of `gap(q0, sqrt(b/a) q1(interp))`
/// along the straight lattice edge from `(i0, j0)` to `(i0 + a, j0 + b)`.
#[allow(clippy::too_many_arguments)]
fn edge_cost(
    q0: &[Quat],
    q1: &[Quat],
    gap: impl Fn(Quat, Quat) -> f64,
    dt: f64,
    i0: usize,
    j0: usize,
    a: usize,
    b: usize,
) -> f64 {
    let slope = b as f64 / a as f64;
    let scale = slope.sqrt();
    let mut total = 0.0;
    for s in 0..=a {
        let pos = j0 as f64 + s as f64 * slope;
        let j = (pos.floor() as usize).min(q1.len() - 2);
        let x = pos - j as f64;
        let v = (q1[j] * (1.0 - x) + q1[j + 1] * x) * scale;
        let e = gap(q0[i0 + s], v);
        total += if s == 0 || s == a { 0.5 * e } else { e };
    }
    total * dt
}

/// Minimum-cost monotone lattice path from `(0, 0)` to `(n, n)` through the
/// `(n + 1)^2` grid, as a list of visited nodes.
fn lattice_path(
    q0: &[Quat],
    q1: &[Quat],
    gap: impl Fn(Quat, Quat) -> f64 + Copy,
    dt: f64,
    window: usize,
) -> Vec<(usize, usize)> {
    let n = q0.len() - 1;
    let width = n + 1;
    let moves = steps(window);
    let mut cost = vec![f64::INFINITY; width * width];
    let mut from = vec![usize::MAX; width * width];
    cost[0] = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            let mut best = f64::INFINITY;
            let mut arg = usize::MAX;
            for &(a, b) in &moves {
                if a > i || b > j {
                    continue;
                }
                let prev = (i - a) * width + (j - b);
                let base = cost[prev];
                if !base.is_finite() {
                    continue;
                }
                let c = base + edge_cost(q0, q1, gap, dt, i - a, j - b, a, b);
                if c < best {
                    best = c;
                    arg = prev;
                }
            }
            cost[i * width + j] = best;
            from[i * width + j] = arg;
        }
    }
    let mut path = vec![(n, n)];
    let mut node = n * width + n;
    while node != 0 {
        node = from[node];
        path.push((node / width, node % width));
    }
    path.reverse();
    path
}

/// Converts a lattice path into warp values at every grid point.
fn path_to_warp(grid: GridSpec, path: &[(usize, usize)]) -> Result<Warp> {
    let dt = grid.dt();
    let mut values = Vec::with_capacity(grid.n_samples() + 1);
    for seg in path.windows(2) {
        let ((i0, j0), (i1, j1)) = (seg[0], seg[1]);
        let slope = (j1 - j0) as f64 / (i1 - i0) as f64;
        for i in i0..i1 {
            values.push((j0 as f64 + (i - i0) as f64 * slope) * dt);
        }
    }
    values.push(2.0);
    Warp::new(grid, values)
}

/// Squared L2 distance `||q0 - q1||^2`.
pub(crate) fn l2_gap(q0: &QuaternionPath, q1: &QuaternionPath) -> f64 {
    let d: Vec<f64> = q0
        .samples()
        .iter()
        .zip(q1.samples())
        .map(|(a, b)| (*a - *b).norm_sq())
        .collect();
    q0.grid().integrate(&d, q0.class())
}

/// `||q0 - q1||^2` minimized over pointwise twists of `q1`.
pub(crate) fn twist_free_l2_gap(q0: &QuaternionPath, q1: &QuaternionPath) -> f64 {
    let d: Vec<f64> = q0
        .samples()
        .iter()
        .zip(q1.samples())
        .map(|(a, b)| twist_free_gap(*a, *b))
        .collect();
    q0.grid().integrate(&d, q0.class())
}

fn reparam(
    q0: &QuaternionPath,
    q1: &QuaternionPath,
    cfg: &DPConfig,
    gap: impl Fn(Quat, Quat) -> f64 + Copy,
    total: impl Fn(&QuaternionPath, &QuaternionPath) -> f64,
) -> Result<(Warp, QuaternionPath)> {
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != q1.class() {
        return Err(Error::ClosureMismatch);
    }
    cfg.validate()?;
    let grid = q0.grid();
    let path = lattice_path(&q0.unrolled(), &q1.unrolled(), gap, grid.dt(), cfg.window);
    let mut warp = path_to_warp(grid, &path)?;
    let mut best = (Warp::identity(grid), q1.clone());
    let mut best_gap = total(q0, q1);
    for _ in 0..=SMOOTHING_PASSES {
        let warped = apply_warp(q1, &warp)?;
        let g = total(q0, &warped);
        if g <= best_gap {
            best = (warp.clone(), warped);
            best_gap = g;
        }
        match smoothed(&warp, cfg.window) {
            Some(w) => warp = w,
            None => break,
        }
    }
    Ok(best)
}

/// Moving-average passes tried on the lattice warp.
const SMOOTHING_PASSES: usize = 8;

/// Centered moving average of half-width `h`, shrinking near the ends so the
/// endpoints stay fixed. Lattice warps only take slopes `b/a` with small `a`
/// and `b`; averaging over a few cells lets the slope vary continuously.
fn smoothed(w: &Warp, h: usize) -> Option<Warp> {
    let v = w.values();
    let n = v.len() - 1;
    let out = (0..=n)
        .map(|i| {
            let r = h.min(i).min(n - i);
            v[i - r..=i + r].iter().sum::<f64>() / (2 * r + 1) as f64
        })
        .collect();
    Warp::new(w.grid(), out).ok()
}

/// Approximately optimal warp of `q1` onto `q0` and the warped path.
///
/// The search runs over monotone lattice paths with steps of at most
/// `cfg.window` cells, so warp slopes lie in `[1/window, window]`. Closed
/// inputs are treated on their unrolled `n + 1` samples with both endpoints
/// fixed (use a seed search for cyclic shifts). If the warped path is not
/// closer to `q0` than `q1` itself, the identity is returned.
pub fn dp_reparam(q0: &QuaternionPath, q1: &QuaternionPath, cfg: &DPConfig) -> Result<(Warp, QuaternionPath)> {
    reparam(q0, q1, cfg, framed_gap, l2_gap)
}

/// [`dp_reparam`] for unframed comparisons: the integrand is minimized over
/// the frame twist at every point, so warp and twist are found jointly. The
/// returned path is warped but not yet twisted.
pub fn dp_reparam_unframed(q0: &QuaternionPath, q1: &QuaternionPath, cfg: &DPConfig) -> Result<(Warp, QuaternionPath)> {
    reparam(q0, q1, cfg, twist_free_gap, twist_free_l2_gap)
}
