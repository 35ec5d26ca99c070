//! Search over cyclic shifts of the starting point of closed curves.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::grid::periodic_value;
use crate::linalg::{svd2, C2x2};
use crate::quat::Quat;
use crate::registration::DPConfig;
use crate::stiefel::StiefelPoint;

fn candidate_shifts(n: usize, stride: usize) -> impl Iterator<Item = isize> {
    (0..n).step_by(stride).map(|s| s as isize)
}

/// Best cyclic shift `s` of `q1` (`q1(t) -> q1(t + s dt)`) against `q0`.
///
/// Each shift is scored by `|int conj(q1_s) q0 dt|`, the alignment after the
/// optimal rotation, which is invariant under `q1 -> -q1`. Ties go to the
/// smallest shift.
pub fn seed_search(q0: &QuaternionPath, q1: &QuaternionPath, cfg: &DPConfig) -> Result<(isize, QuaternionPath)> {
    if !q0.class().is_closed() || !q1.class().is_closed() {
        return Err(Error::NotClosed);
    }
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != q1.class() {
        return Err(Error::ClosureMismatch);
    }
    cfg.validate()?;
    let sign = q1.class().wrap_sign();
    let a = q0.samples();
    let b = q1.samples();
    let score = |s: isize| -> f64 {
        let sum: Quat = (0..a.len() as isize)
            .map(|i| periodic_value(b, sign, i + s).conj() * a[i as usize])
            .fold(Quat::new(0.0, 0.0, 0.0, 0.0), |acc, x| acc + x);
        sum.norm()
    };
    let best = best_shift(candidate_shifts(a.len(), cfg.seed_stride), score, |x, y| x > y);
    Ok((best, q1.shifted(best)))
}

/// Best cyclic shift of `s1` against `s0`, minimizing the Grassmann distance.
pub fn seed_search_stiefel(s0: &StiefelPoint, s1: &StiefelPoint, cfg: &DPConfig) -> Result<(isize, StiefelPoint)> {
    s0.grid().ensure_same(&s1.grid())?;
    if s0.class() != s1.class() {
        return Err(Error::ParityMismatch);
    }
    if s0.field() != s1.field() {
        return Err(Error::FieldMismatch);
    }
    cfg.validate()?;
    let sign = s1.class().wrap_sign();
    let dt = s0.grid().dt();
    let [a0, a1] = s0.basis();
    let [b0, b1] = s1.basis();
    let score = |s: isize| -> f64 {
        let mut g = C2x2::zeros();
        for i in 0..a0.len() {
            let c0 = periodic_value(b0, sign, i as isize + s).conj();
            let c1 = periodic_value(b1, sign, i as isize + s).conj();
            g[(0, 0)] += a0[i] * c0;
            g[(0, 1)] += a0[i] * c1;
            g[(1, 0)] += a1[i] * c0;
            g[(1, 1)] += a1[i] * c1;
        }
        let g = g * Complex64::from(dt);
        let sv = svd2(&g).s;
        sv[0].min(1.0).acos().hypot(sv[1].min(1.0).acos())
    };
    let best = best_shift(candidate_shifts(a0.len(), cfg.seed_stride), score, |x, y| x < y);
    Ok((best, s1.shifted(best)))
}

fn best_shift(
    shifts: impl Iterator<Item = isize>,
    score: impl Fn(isize) -> f64,
    better: impl Fn(f64, f64) -> bool,
) -> isize {
    let mut best = (0, score(0));
    for s in shifts.skip(1) {
        let v = score(s);
        if better(v, best.1) {
            best = (s, v);
        }
    }
    best.0
}
