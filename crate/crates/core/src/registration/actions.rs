//! Group actions on quaternionic paths: reparameterization warps, rotations
//! and pointwise frame twists.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::grid::{ClosureClass, GridSpec, Interp, Sample};
use crate::quat::Quat;
use crate::stiefel::StiefelPoint;

/// Tolerance on the period condition `rho(2) - rho(0) = 2`.
const PERIOD_TOL: f64 = 1e-9;

/// A strictly increasing reparameterization sampled at the `n + 1` grid
/// points of `[0, 2]`, with `rho(2) = rho(0) + 2`.
///
/// Warps of open curves fix both endpoints. Warps of closed curves may start
/// anywhere (a cyclic seed shift) and extend to the real line by
/// `rho(t + 2) = rho(t) + 2`. Between grid points the warp is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Warp {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Warp {
    pub fn identity(grid: GridSpec) -> Self {
        Self {
            grid,
            values: (0..=grid.n_samples()).map(|i| grid.t(i)).collect(),
        }
    }

    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values, ClosureClass::Open)?;
        if let Some(index) = values.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotoneWarp { index: index + 1 });
        }
        let n = grid.n_samples();
        if !((values[n] - values[0] - 2.0).abs() <= PERIOD_TOL) {
            return Err(Error::InvalidArgument(format!(
                "warp must advance by 2 over the domain, got {}",
                values[n] - values[0]
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` on the grid.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, (0..=grid.n_samples()).map(|i| f(grid.t(i))).collect())
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True if `rho(0) = 0` and `rho(2) = 2`, as required for open curves.
    pub fn is_anchored(&self) -> bool {
        self.values[0].abs() <= PERIOD_TOL && (self.values[self.grid.n_samples()] - 2.0).abs() <= PERIOD_TOL
    }

    /// Piecewise-linear evaluation, extended by `rho(t + 2) = rho(t) + 2`.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.grid.n_samples();
        let period = (t / 2.0).floor();
        let local = t - 2.0 * period;
        let s = local / self.grid.dt();
        let i = (s.floor() as usize).min(n - 1);
        let x = s - i as f64;
        self.values[i] * (1.0 - x) + self.values[i + 1] * x + 2.0 * period
    }

    /// `rho'` at the grid points.
    ///
    /// Uses fourth-order differences (periodic when `periodic` is set),
    /// falling back to second-order ones wherever the high-order value is
    /// less than half of an adjacent secant slope. Smooth warps never trigger
    /// the fallback; piecewise-linear ones do near kinks, which keeps the
    /// result positive.
    pub fn derivative(&self, periodic: bool) -> Vec<f64> {
        let n = self.grid.n_samples();
        let dt = self.grid.dt();
        let v = &self.values;
        // value at any integer index, using rho(t + 2) = rho(t) + 2
        let at = |i: isize| -> f64 {
            let k = i.div_euclid(n as isize);
            let r = i.rem_euclid(n as isize) as usize;
            v[r] + 2.0 * k as f64
        };
        let high: Vec<f64> = if periodic {
            let deviation: Vec<f64> = (0..n).map(|i| v[i] - self.grid.t(i)).collect();
            let mut d = self.grid.differentiate(&deviation, ClosureClass::Loop);
            d.push(d[0]);
            d.into_iter().map(|x| x + 1.0).collect()
        } else {
            self.grid.differentiate(v, ClosureClass::Open)
        };
        (0..=n)
            .map(|i| {
                let ii = i as isize;
                let left = (periodic || i > 0).then(|| (at(ii) - at(ii - 1)) / dt);
                let right = (periodic || i < n).then(|| (at(ii + 1) - at(ii)) / dt);
                let (low, fallback) = match (left, right) {
                    (Some(l), Some(r)) => (l.min(r), 0.5 * (l + r)),
                    (Some(l), None) => (l, l),
                    (None, Some(r)) => (r, r),
                    (None, None) => unreachable!(),
                };
                if high[i] >= 0.5 * low {
                    high[i]
                } else {
                    fallback
                }
            })
            .collect()
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &Warp) -> Result<Warp> {
        self.grid.ensure_same(&inner.grid)?;
        Warp::new(self.grid, inner.values.iter().map(|t| self.eval(*t)).collect())
    }

    /// The inverse warp, sampled on the same grid.
    pub fn inverse(&self) -> Result<Warp> {
        let values = (0..=self.grid.n_samples())
            .map(|i| self.solve(self.grid.t(i)))
            .collect();
        Warp::new(self.grid, values)
    }

    /// `x` with `rho(x) = y`, by bisection on the extended warp.
    fn solve(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (y - self.values[0] - 2.0, y - self.values[0] + 2.0);
        while self.eval(lo) > y {
            lo -= 2.0;
        }
        while self.eval(hi) < y {
            hi += 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// `t -> rho(t) + offset`.
    pub fn offset(&self, offset: f64) -> Warp {
        Warp {
            grid: self.grid,
            values: self.values.iter().map(|v| v + offset).collect(),
        }
    }

    /// `max_i |rho(t_i) - t_i|`.
    pub fn max_deviation_from_identity(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (v - self.grid.t(i)).abs())
            .fold(0.0, f64::max)
    }
}

/// `sqrt(rho') (f o rho)` on the stored samples of `values`.
pub(crate) fn warp_samples<T: Sample>(grid: GridSpec, class: ClosureClass, values: &[T], rho: &Warp) -> Result<Vec<T>> {
    grid.ensure_same(&rho.grid)?;
    if class == ClosureClass::Open && !rho.is_anchored() {
        return Err(Error::InvalidArgument(
            "open paths require warps fixing both endpoints".into(),
        ));
    }
    let d = rho.derivative(class.is_closed());
    Ok((0..grid.len(class))
        .map(|i| grid.sample_at(values, class, rho.values[i], Interp::Cubic) * d[i].sqrt())
        .collect())
}

/// The reparameterization action `rho . q = sqrt(rho') (q o rho)`.
///
/// `q o rho` is evaluated with four-point interpolation so that the action is
/// an L2 isometry to high accuracy for smooth warps.
pub fn apply_warp(q: &QuaternionPath, rho: &Warp) -> Result<QuaternionPath> {
    let samples = warp_samples(q.grid(), q.class(), q.samples(), rho)?;
    QuaternionPath::new(q.grid(), q.class(), samples)
}

/// Warps both coordinates of a Stiefel point. The result is orthonormal only
/// up to discretization error; callers re-project it.
pub(crate) fn warp_stiefel(p: &StiefelPoint, rho: &Warp) -> Result<StiefelPoint> {
    let z = warp_samples(p.grid(), p.class(), p.z(), rho)?;
    let w = warp_samples(p.grid(), p.class(), p.w(), rho)?;
    Ok(p.with_coords(z, w))
}

/// Right multiplication `q -> q A`; for unit `A` this rotates the framed
/// curve by `h(A)`.
pub fn apply_rotation(q: &QuaternionPath, a: Quat) -> QuaternionPath {
    q.map(|_, s| s * a)
}

/// Pointwise left multiplication by unit complex scalars, rotating the frame
/// by twice the scalar's argument about the tangent.
pub fn apply_twist(q: &QuaternionPath, u: &[Complex64]) -> Result<QuaternionPath> {
    q.grid().check_len(u, q.class())?;
    Ok(q.map(|i, s| Quat::new(u[i].re, u[i].im, 0.0, 0.0) * s))
}

/// Twist acting on a Stiefel point; preserves orthonormality exactly.
pub fn apply_twist_stiefel(p: &StiefelPoint, u: &[Complex64]) -> Result<StiefelPoint> {
    p.grid().check_len(u, p.class())?;
    if p.field() == crate::stiefel::Field::Real {
        return Err(Error::RealFieldTwist);
    }
    let z = p.z().iter().zip(u).map(|(a, b)| a * b).collect();
    let w = p.w().iter().zip(u).map(|(a, b)| a * b).collect();
    Ok(p.with_coords(z, w))
}

/// `e^{i pi t / 2}`: a full turn of the frame over the curve, which swaps
/// loops and anti-loops (and flips the mod-2 linking number).
pub fn half_twist(grid: GridSpec, class: ClosureClass) -> Vec<Complex64> {
    grid.params(class)
        .into_iter()
        .map(|t| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * t))
        .collect()
}

/// Applies [`half_twist`] to a Stiefel point, which moves it to the other
/// closure class (and flips the linking parity of its framed curve).
pub fn half_twist_stiefel(p: &StiefelPoint) -> Result<StiefelPoint> {
    let u = half_twist(p.grid(), p.class());
    let twisted = apply_twist_stiefel(p, &u)?;
    StiefelPoint::unchecked(
        p.field(),
        p.grid(),
        p.class().flipped(),
        twisted.z().to_vec(),
        twisted.w().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::smooth_warp;

    #[test]
    fn identity_actions() {
        let g = GridSpec::new(32).unwrap();
        let q = QuaternionPath::from_fn(g, ClosureClass::Open, |t| Quat::new(1.0 + t, t.sin(), 0.2, -t));
        let id = Warp::identity(g);
        assert!(apply_warp(&q, &id).unwrap().max_deviation(&q) < 1e-14);
        assert_eq!(apply_rotation(&q, Quat::ONE), q);
        let ones = vec![Complex64::from(1.0); 33];
        assert_eq!(apply_twist(&q, &ones).unwrap(), q);
    }

    #[test]
    fn non_monotone_rejected() {
        let g = GridSpec::new(8).unwrap();
        let mut v: Vec<f64> = (0..=8).map(|i| g.t(i)).collect();
        v[4] = v[3];
        assert_eq!(Warp::new(g, v), Err(Error::NonMonotoneWarp { index: 4 }));
    }

    #[test]
    fn inverse_and_compose() {
        let g = GridSpec::new(64).unwrap();
        let w = Warp::from_fn(g, smooth_warp(0.4, 1)).unwrap();
        let inv = w.inverse().unwrap();
        assert!(w.compose(&inv).unwrap().max_deviation_from_identity() < 2e-3);
        let shifted = w.offset(0.25);
        assert!((shifted.eval(2.1) - (w.eval(0.1) + 2.25)).abs() < 1e-14);
        let back = shifted.inverse().unwrap();
        assert!((shifted.eval(back.values()[10]) - g.t(10)).abs() < 1e-12);
    }

    #[test]
    fn derivative_positive_on_kinked_warp() {
        let g = GridSpec::new(16).unwrap();
        // slope 1/6 then 6/5... kinks at lattice points
        let mut v = vec![0.0];
        for i in 1..=16 {
            let step = if i <= 6 { 1.0 / 6.0 } else { 1.0 / 6.0 + 1e-9 };
            v.push(v[i - 1] + step * g.dt());
        }
        let total = v[16];
        let extra = (2.0 - total) / 10.0;
        for (i, x) in v.iter_mut().enumerate().skip(7) {
            *x += extra * (i - 6) as f64;
        }
        let w = Warp::new(g, v).unwrap();
        assert!(w.derivative(false).iter().all(|d| *d > 0.0));
        assert!(w.derivative(true).iter().all(|d| *d > 0.0));
    }
}
