//! Uniform parameter grids on `[0, 2]` and the discrete calculus used
//! throughout the crate: quadrature, cumulative integration, differentiation
//! and interpolation.
//!
//! Open paths store `n + 1` samples (both endpoints). Loops and anti-loops
//! store `n` samples on `[0, 2)`; index `n` aliases index `0`, with a sign
//! flip for anti-loops.
//!
//! Quadrature on periodic data is the composite trapezoid rule (equal
//! weights). On open data it is the trapezoid rule with the Gregory endpoint
//! correction, weights `3/8, 7/6, 23/24, 1, ..., 1, 23/24, 7/6, 3/8`, so that
//! cumulative integrals of analytic data are fourth-order accurate.
//! Cumulative integration applies the same correction at every prefix, so the
//! last entry equals [`GridSpec::integrate`] exactly.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Minimum number of parameter samples.
pub const MIN_SAMPLES: usize = 8;

/// Values that can be sampled on a grid: vectors over the reals.
pub trait Sample: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Sample for T where T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Boundary behaviour of a sampled path on `[0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosureClass {
    /// Independent endpoints, `n + 1` samples.
    Open,
    /// `q(2) = q(0)`, `n` samples.
    Loop,
    /// `q(2) = -q(0)`, `n` samples.
    AntiLoop,
}

impl ClosureClass {
    pub fn is_closed(self) -> bool {
        !matches!(self, ClosureClass::Open)
    }

    /// Sign picked up when wrapping once around the parameter circle.
    pub fn wrap_sign(self) -> f64 {
        match self {
            ClosureClass::AntiLoop => -1.0,
            _ => 1.0,
        }
    }

    /// The other closed class; the open class maps to itself.
    pub fn flipped(self) -> Self {
        match self {
            ClosureClass::Loop => ClosureClass::AntiLoop,
            ClosureClass::AntiLoop => ClosureClass::Loop,
            ClosureClass::Open => ClosureClass::Open,
        }
    }
}

/// Interpolation order used when resampling a path at off-grid parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interp {
    Linear,
    /// Four-point Lagrange interpolation.
    Cubic,
}

/// Uniform grid `t_i = i * dt` with `dt = 2 / n_samples`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n_samples: usize,
}

impl GridSpec {
    pub fn new(n_samples: usize) -> Result<Self> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::GridTooSmall {
                got: n_samples,
                min: MIN_SAMPLES,
            });
        }
        Ok(Self { n_samples })
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn dt(&self) -> f64 {
        2.0 / self.n_samples as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i == self.n_samples {
            2.0
        } else {
            i as f64 * self.dt()
        }
    }

    /// Number of stored samples for the given boundary class.
    pub fn len(&self, class: ClosureClass) -> usize {
        match class {
            ClosureClass::Open => self.n_samples + 1,
            _ => self.n_samples,
        }
    }

    /// Parameter values of the stored samples.
    pub fn params(&self, class: ClosureClass) -> Vec<f64> {
        (0..self.len(class)).map(|i| self.t(i)).collect()
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self.n_samples != other.n_samples {
            return Err(Error::GridMismatch {
                left: self.n_samples,
                right: other.n_samples,
            });
        }
        Ok(())
    }

    pub fn check_len<T>(&self, values: &[T], class: ClosureClass) -> Result<()> {
        let expected = self.len(class);
        if values.len() != expected {
            return Err(Error::SampleCount {
                got: values.len(),
                expected,
            });
        }
        Ok(())
    }

    /// Quadrature weights for the stored samples.
    pub fn weights(&self, class: ClosureClass) -> Vec<f64> {
        let dt = self.dt();
        match class {
            ClosureClass::Open => {
                let n = self.n_samples;
                let mut w = vec![dt; n + 1];
                let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
                for (k, e) in ends.iter().enumerate() {
                    w[k] = e * dt;
                    w[n - k] = e * dt;
                }
                w
            }
            _ => vec![dt; self.n_samples],
        }
    }

    pub fn integrate<T: Sample>(&self, values: &[T], class: ClosureClass) -> T {
        debug_assert_eq!(values.len(), self.len(class));
        let dt = self.dt();
        match class {
            ClosureClass::Open => {
                let n = self.n_samples;
                let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
                let mut acc = T::zero();
                for (k, e) in ends.iter().enumerate() {
                    acc = acc + (values[k] + values[n - k]) * (e * dt);
                }
                for v in &values[3..=n - 3] {
                    acc = acc + *v * dt;
                }
                acc
            }
            _ => values.iter().fold(T::zero(), |acc, v| acc + *v) * dt,
        }
    }

    /// Antiderivative based at zero, evaluated at all `n + 1` grid points
    /// (including `t = 2` for closed data).
    pub fn cumulative<T: Sample>(&self, values: &[T], class: ClosureClass) -> Vec<T> {
        debug_assert_eq!(values.len(), self.len(class));
        let n = self.n_samples;
        let dt = self.dt();
        let ext = |i: usize| -> T {
            if i < values.len() {
                values[i]
            } else {
                values[i - n] * class.wrap_sign()
            }
        };
        let deriv = self.endpoint_aware_slope(values, class);
        let correction = dt * dt / 12.0;
        let mut out = Vec::with_capacity(n + 1);
        let mut trap = T::zero();
        out.push(T::zero());
        for k in 1..=n {
            trap = trap + (ext(k - 1) + ext(k)) * (0.5 * dt);
            out.push(trap - (deriv(k) - deriv(0)) * correction);
        }
        out
    }

    /// Second-order slope estimates used by the Gregory correction.
    fn endpoint_aware_slope<'a, T: Sample>(&self, values: &'a [T], class: ClosureClass) -> impl Fn(usize) -> T + 'a {
        let n = self.n_samples;
        let inv = 1.0 / (2.0 * self.dt());
        let sign = class.wrap_sign();
        move |k: usize| -> T {
            match class {
                ClosureClass::Open => {
                    if k == 0 {
                        (values[1] * 4.0 - values[0] * 3.0 - values[2]) * inv
                    } else if k == n {
                        (values[n] * 3.0 - values[n - 1] * 4.0 + values[n - 2]) * inv
                    } else {
                        (values[k + 1] - values[k - 1]) * inv
                    }
                }
                _ => {
                    let at = |i: isize| -> T { periodic_value(values, sign, i) };
                    let k = k as isize;
                    (at(k + 1) - at(k - 1)) * inv
                }
            }
        }
    }

    /// Fourth-order finite-difference derivative: central five-point stencil
    /// in the interior (periodic for closed data), one-sided five-point
    /// stencils at open endpoints.
    pub fn differentiate<T: Sample>(&self, values: &[T], class: ClosureClass) -> Vec<T> {
        debug_assert_eq!(values.len(), self.len(class));
        let inv = 1.0 / (12.0 * self.dt());
        let central = |a: T, b: T, c: T, d: T| (a - b * 8.0 + c * 8.0 - d) * inv;
        match class {
            ClosureClass::Open => {
                let n = self.n_samples;
                let f = values;
                let mut out = Vec::with_capacity(n + 1);
                out.push((f[1] * 48.0 - f[0] * 25.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * inv);
                out.push((f[2] * 18.0 - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0 + f[4]) * inv);
                for i in 2..=n - 2 {
                    out.push(central(f[i - 2], f[i - 1], f[i + 1], f[i + 2]));
                }
                out.push((f[n] * 3.0 + f[n - 1] * 10.0 - f[n - 2] * 18.0 + f[n - 3] * 6.0 - f[n - 4]) * inv);
                out.push((f[n] * 25.0 - f[n - 1] * 48.0 + f[n - 2] * 36.0 - f[n - 3] * 16.0 + f[n - 4] * 3.0) * inv);
                out
            }
            _ => {
                let sign = class.wrap_sign();
                (0..values.len() as isize)
                    .map(|i| {
                        central(
                            periodic_value(values, sign, i - 2),
                            periodic_value(values, sign, i - 1),
                            periodic_value(values, sign, i + 1),
                            periodic_value(values, sign, i + 2),
                        )
                    })
                    .collect()
            }
        }
    }

    /// Value at an arbitrary parameter `t`. Closed data is extended
    /// (anti-)periodically; open data is clamped to `[0, 2]`.
    pub fn sample_at<T: Sample>(&self, values: &[T], class: ClosureClass, t: f64, interp: Interp) -> T {
        let s = t / self.dt();
        match class {
            ClosureClass::Open => {
                let n = self.n_samples;
                let s = s.clamp(0.0, n as f64);
                match interp {
                    Interp::Linear => {
                        let i = (s.floor() as usize).min(n - 1);
                        let x = s - i as f64;
                        values[i] * (1.0 - x) + values[i + 1] * x
                    }
                    Interp::Cubic => {
                        let i = (s.floor() as usize).min(n - 1);
                        let start = i.saturating_sub(1).min(n - 3);
                        lagrange4(|k| values[start + k], s - start as f64)
                    }
                }
            }
            _ => {
                let sign = class.wrap_sign();
                let i = s.floor() as isize;
                let x = s - i as f64;
                match interp {
                    Interp::Linear => {
                        periodic_value(values, sign, i) * (1.0 - x) + periodic_value(values, sign, i + 1) * x
                    }
                    Interp::Cubic => lagrange4(|k| periodic_value(values, sign, i - 1 + k as isize), x + 1.0),
                }
            }
        }
    }
}

/// Sample `i` of a closed path extended to all integers.
pub(crate) fn periodic_value<T: Sample>(values: &[T], sign: f64, i: isize) -> T {
    let n = values.len() as isize;
    let wraps = i.div_euclid(n);
    let idx = i.rem_euclid(n) as usize;
    if wraps % 2 == 0 {
        values[idx]
    } else {
        values[idx] * sign
    }
}

/// Lagrange interpolation through nodes `0, 1, 2, 3` evaluated at `s`.
fn lagrange4<T: Sample>(node: impl Fn(usize) -> T, s: f64) -> T {
    let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    node(0) * l0 + node(1) * l1 + node(2) * l2 + node(3) * l3
}
