//! Continuous refinement of a warp after the lattice search.
//!
//! Lattice warps are accurate to about one grid step, and a warp error of
//! one step already costs a distance comparable to a few grid steps. A few
//! damped Gauss-Newton iterations on a smooth perturbation `t + sum c_k phi_k(t)`
//! remove most of that error.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::registration::actions::{apply_warp, Warp};
use crate::registration::dp::l2_gap;

/// Iteration cap of the Gauss-Newton loop.
const MAX_ITERS: usize = 40;
/// Relative gap decrease below which the loop stops.
const STALL: f64 = 1e-9;

/// Perturbation basis: for closed paths a constant (the seed shift) plus
/// `cos, sin(k pi t)`; for open paths `sin(k pi t / 2)`, which vanish at both
/// ends. Returns values and derivatives at `t`.
fn basis(closed: bool, modes: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let mut v = Vec::with_capacity(2 * modes + 1);
    let mut d = Vec::with_capacity(2 * modes + 1);
    if closed {
        v.push(1.0);
        d.push(0.0);
        for k in 1..=modes {
            let w = k as f64 * PI;
            v.push((w * t).cos());
            d.push(-w * (w * t).sin());
            v.push((w * t).sin());
            d.push(w * (w * t).cos());
        }
    } else {
        for k in 1..=2 * modes {
            let w = k as f64 * PI / 2.0;
            v.push((w * t).sin());
            d.push(w * (w * t).cos());
        }
    }
    (v, d)
}

/// Refines the warp `rho` of `q1` onto `q0`, minimizing `||q0 - rho . q1||`.
///
/// `modes` sets the finest perturbation frequency. Returns the refined warp
/// and the warped path; the result is never farther from `q0` than
/// `rho . q1`.
pub fn refine_warp(
    q0: &QuaternionPath,
    q1: &QuaternionPath,
    rho: &Warp,
    modes: usize,
) -> Result<(Warp, QuaternionPath)> {
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != q1.class() {
        return Err(Error::ClosureMismatch);
    }
    let grid = q0.grid();
    let class = q0.class();
    let closed = class.is_closed();
    let params = grid.params(class);
    let weights = grid.weights(class);
    let table: Vec<(Vec<f64>, Vec<f64>)> = params.iter().map(|t| basis(closed, modes, *t)).collect();
    let dim = table[0].0.len();

    let mut warp = rho.clone();
    let mut cur = apply_warp(q1, &warp)?;
    let mut gap = l2_gap(q0, &cur);
    let mut damping = 1e-3;
    for _ in 0..MAX_ITERS {
        if gap <= 0.0 {
            break;
        }
        let dq = grid.differentiate(cur.samples(), class);
        let mut a = DMatrix::<f64>::zeros(dim, dim);
        let mut b = DVector::<f64>::zeros(dim);
        let mut col = vec![crate::quat::Quat::new(0.0, 0.0, 0.0, 0.0); dim];
        for i in 0..params.len() {
            let (v, d) = &table[i];
            let q = cur.samples()[i];
            for k in 0..dim {
                col[k] = q * (0.5 * d[k]) + dq[i] * v[k];
            }
            let r = q0.samples()[i] - q;
            for k in 0..dim {
                b[k] += weights[i] * col[k].dot(r);
                for l in k..dim {
                    a[(k, l)] += weights[i] * col[k].dot(col[l]);
                }
            }
        }
        for k in 0..dim {
            for l in 0..k {
                a[(k, l)] = a[(l, k)];
            }
        }
        let mut improved = false;
        while damping < 1e6 {
            let mut m = a.clone();
            for k in 0..dim {
                m[(k, k)] += damping * a[(k, k)].max(1e-12);
            }
            let Some(c) = m.cholesky().map(|ch| ch.solve(&b)) else {
                damping *= 10.0;
                continue;
            };
            let step = Warp::from_fn(grid, |t| {
                let (v, _) = basis(closed, modes, t);
                t + v.iter().zip(c.iter()).map(|(x, y)| x * y).sum::<f64>()
            });
            let cand = step
                .and_then(|s| warp.compose(&s))
                .and_then(|w| Ok((apply_warp(q1, &w)?, w)));
            match cand {
                Ok((path, w)) if l2_gap(q0, &path) < gap => {
                    let g = l2_gap(q0, &path);
                    let stalled = gap - g <= STALL * gap;
                    warp = w;
                    cur = path;
                    gap = g;
                    damping = (damping / 3.0).max(1e-9);
                    improved = !stalled;
                    break;
                }
                _ => damping *= 10.0,
            }
        }
        if !improved {
            break;
        }
    }
    Ok((warp, cur))
}
