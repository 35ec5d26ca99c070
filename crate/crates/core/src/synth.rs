//! Analytic test curves: circles, ellipses, helices, trefoils and torus
//! spirals, plus random smooth loops.
//!
//! Every curve is a sum of a linear term and cosine modes per coordinate, so
//! positions, velocities and accelerations are all exact.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::Rng;

use crate::curve::{BaseCurve, Closure, FramedCurve, Vec3};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::planar::PlanarCurve;

/// `amp * cos(freq * t + phase)` along coordinate `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub axis: usize,
    pub freq: f64,
    pub amp: f64,
    pub phase: f64,
}

impl TrigTerm {
    pub fn cos(axis: usize, freq: f64, amp: f64) -> Self {
        Self {
            axis,
            freq,
            amp,
            phase: 0.0,
        }
    }

    pub fn sin(axis: usize, freq: f64, amp: f64) -> Self {
        Self {
            axis,
            freq,
            amp,
            phase: -FRAC_PI_2,
        }
    }
}

/// A trigonometric space curve on `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigCurve {
    closure: Closure,
    linear: Vec3,
    terms: Vec<TrigTerm>,
    rotation: Matrix3<f64>,
}

impl TrigCurve {
    pub fn new(closure: Closure, linear: Vec3, terms: Vec<TrigTerm>) -> Self {
        Self {
            closure,
            linear,
            terms,
            rotation: Matrix3::identity(),
        }
    }

    pub fn circle(radius: f64) -> Self {
        Self::ellipse(radius, radius)
    }

    /// Ellipse in the xy-plane, traversed once.
    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::new(
            Closure::Closed,
            Vec3::zeros(),
            vec![TrigTerm::cos(0, PI, a), TrigTerm::sin(1, PI, b)],
        )
    }

    /// Circular helix about the z-axis making `turns` full turns while
    /// rising by `rise`.
    pub fn helix(radius: f64, rise: f64, turns: f64) -> Self {
        let w = PI * turns;
        Self::new(
            Closure::Open,
            Vec3::new(0.0, 0.0, rise / 2.0),
            vec![TrigTerm::cos(0, w, radius), TrigTerm::sin(1, w, radius)],
        )
    }

    /// Straight segment from the origin along x; has no Frenet frame.
    pub fn segment(length: f64) -> Self {
        Self::new(Closure::Open, Vec3::new(length / 2.0, 0.0, 0.0), vec![])
    }

    /// The standard trefoil knot `(sin s + 2 sin 2s, cos s - 2 cos 2s, -sin 3s)`.
    pub fn trefoil() -> Self {
        Self::new(
            Closure::Closed,
            Vec3::zeros(),
            vec![
                TrigTerm::sin(0, PI, 1.0),
                TrigTerm::sin(0, 2.0 * PI, 2.0),
                TrigTerm::cos(1, PI, 1.0),
                TrigTerm::cos(1, 2.0 * PI, -2.0),
                TrigTerm::sin(2, 3.0 * PI, -1.0),
            ],
        )
    }

    /// `((R + r cos qs) cos ps, (R + r cos qs) sin ps, r sin qs)` for
    /// `s = pi t`: a spiral winding `q` times around a torus while going `p`
    /// times around its core.
    pub fn torus_spiral(major: f64, minor: f64, p: u32, q: u32) -> Self {
        let (p, q) = (p as f64 * PI, q as f64 * PI);
        let h = minor / 2.0;
        Self::new(
            Closure::Closed,
            Vec3::zeros(),
            vec![
                TrigTerm::cos(0, p, major),
                TrigTerm::cos(0, p + q, h),
                TrigTerm::cos(0, p - q, h),
                TrigTerm::sin(1, p, major),
                TrigTerm::sin(1, p + q, h),
                TrigTerm::sin(1, p - q, h),
                TrigTerm::sin(2, q, minor),
            ],
        )
    }

    /// A circle perturbed by random low-frequency modes in all three
    /// coordinates. Amplitudes decay like `amplitude / k` for mode `k`.
    pub fn random_loop<R: Rng + ?Sized>(rng: &mut R, modes: usize, amplitude: f64) -> Self {
        let mut terms = vec![TrigTerm::cos(0, PI, 1.0), TrigTerm::sin(1, PI, 1.0)];
        for k in 1..=modes {
            for axis in 0..3 {
                terms.push(TrigTerm {
                    axis,
                    freq: k as f64 * PI,
                    amp: amplitude * rng.random_range(-1.0..1.0) / k as f64,
                    phase: rng.random_range(0.0..2.0 * PI),
                });
            }
        }
        Self::new(Closure::Closed, Vec3::zeros(), terms)
    }

    /// Rigidly rotated copy.
    pub fn rotated(&self, rotation: &Matrix3<f64>) -> Self {
        Self {
            rotation: rotation * self.rotation,
            ..self.clone()
        }
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    fn eval(&self, t: f64, order: u32) -> Vec3 {
        let mut out = match order {
            0 => self.linear * t,
            1 => self.linear,
            _ => Vec3::zeros(),
        };
        for term in &self.terms {
            let arg = term.freq * t + term.phase;
            // d^k/dt^k cos(x) = cos(x + k pi/2)
            let value = term.amp * term.freq.powi(order as i32) * (arg + order as f64 * FRAC_PI_2).cos();
            out[term.axis] += value;
        }
        self.rotation * out
    }

    pub fn position(&self, t: f64) -> Vec3 {
        self.eval(t, 0)
    }

    pub fn velocity(&self, t: f64) -> Vec3 {
        self.eval(t, 1)
    }

    pub fn acceleration(&self, t: f64) -> Vec3 {
        self.eval(t, 2)
    }

    /// Unit principal normal; `None` where the curvature is below `1e-8`.
    pub fn principal_normal(&self, t: f64) -> Option<Vec3> {
        let v = self.velocity(t);
        let a = self.acceleration(t);
        let tangent = v.normalize();
        let n = a - tangent * tangent.dot(&a);
        if n.norm() / v.norm_squared() < 1e-8 {
            None
        } else {
            Some(n.normalize())
        }
    }

    pub fn sample(&self, grid: GridSpec) -> Result<BaseCurve> {
        let params = grid.params(self.closure.class());
        let gamma = params.iter().map(|t| self.position(*t)).collect();
        let velocity = params.iter().map(|t| self.velocity(*t)).collect();
        BaseCurve::new(grid, self.closure, gamma, velocity)
    }

    /// Samples the reparameterized curve `t -> c(phi(t))`, whose velocity is
    /// `phi'(t) c'(phi(t))`. For closed curves `phi` may include a shift of
    /// the starting point.
    pub fn sample_reparam(
        &self,
        grid: GridSpec,
        phi: impl Fn(f64) -> f64,
        dphi: impl Fn(f64) -> f64,
    ) -> Result<BaseCurve> {
        let params = grid.params(self.closure.class());
        let gamma = params.iter().map(|t| self.position(phi(*t))).collect();
        let velocity = params.iter().map(|t| self.velocity(phi(*t)) * dphi(*t)).collect();
        BaseCurve::new(grid, self.closure, gamma, velocity)
    }

    /// [`Self::sample_reparam`] with the Frenet frame rotated about the
    /// tangent by `twist(t)`.
    pub fn sample_frenet_reparam(
        &self,
        grid: GridSpec,
        phi: impl Fn(f64) -> f64,
        dphi: impl Fn(f64) -> f64,
        twist: impl Fn(f64) -> f64,
    ) -> Result<FramedCurve> {
        let base = self.sample_reparam(grid, &phi, dphi)?;
        let params = grid.params(self.closure.class());
        let mut frame = Vec::with_capacity(params.len());
        for (i, t) in params.iter().enumerate() {
            let n = self
                .principal_normal(phi(*t))
                .ok_or(Error::VanishingCurvature { index: i })?;
            let b = base.tangent(i).cross(&n);
            let a = twist(*t);
            frame.push(n * a.cos() + b * a.sin());
        }
        FramedCurve::with_projected_frame(base, frame)
    }

    /// Samples the curve with its analytic Frenet frame.
    pub fn sample_frenet(&self, grid: GridSpec) -> Result<FramedCurve> {
        self.sample_frenet_twisted(grid, |_| 0.0)
    }

    /// Analytic Frenet frame rotated about the tangent by `twist(t)`.
    pub fn sample_frenet_twisted(&self, grid: GridSpec, twist: impl Fn(f64) -> f64) -> Result<FramedCurve> {
        self.sample_frenet_reparam(grid, |t| t, |_| 1.0, twist)
    }

    /// The xy-projection as a planar curve.
    pub fn sample_planar(&self, grid: GridSpec) -> Result<PlanarCurve> {
        let params = grid.params(self.closure.class());
        let points = params
            .iter()
            .map(|t| {
                let p = self.position(*t);
                Complex64::new(p.x, p.y)
            })
            .collect();
        let velocity = params
            .iter()
            .map(|t| {
                let v = self.velocity(*t);
                Complex64::new(v.x, v.y)
            })
            .collect();
        PlanarCurve::new(grid, self.closure, points, velocity)
    }
}

/// Uniformly distributed rotation matrix.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    random_unit_quat(rng).hopf_rotation()
}

/// Uniformly distributed unit quaternion (normalized Gaussian 4-vector).
pub fn random_unit_quat<R: Rng + ?Sized>(rng: &mut R) -> crate::quat::Quat {
    loop {
        let q = crate::quat::Quat::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        if q.norm() > 1e-6 {
            return q.normalize();
        }
    }
}

/// Standard normal deviate (Box-Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// The diffeomorphism `t + s / (k pi) sin(k pi t)` of `[0, 2]`, with
/// `s = strength` clamped to `[-1/2, 1/2]` so the slope stays in `[1/2, 3/2]`.
pub fn smooth_warp(strength: f64, mode: u32) -> impl Fn(f64) -> f64 + Clone {
    let k = mode.max(1) as f64;
    let eps = strength.clamp(-0.5, 0.5) / (k * PI);
    move |t: f64| t + eps * (k * PI * t).sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff(f: impl Fn(f64) -> Vec3, t: f64) -> Vec3 {
        let h = 1e-5;
        (f(t + h) - f(t - h)) / (2.0 * h)
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let curves = [
            TrigCurve::helix(1.0, 0.7, 1.5),
            TrigCurve::trefoil(),
            TrigCurve::torus_spiral(2.0, 0.5, 2, 3),
            TrigCurve::ellipse(2.0, 0.5),
        ];
        for c in &curves {
            for t in [0.1, 0.77, 1.3] {
                assert!((diff(|s| c.position(s), t) - c.velocity(t)).norm() < 1e-6);
                assert!((diff(|s| c.velocity(s), t) - c.acceleration(t)).norm() < 1e-5);
            }
        }
    }

    #[test]
    fn closed_curves_are_periodic() {
        for c in [
            TrigCurve::trefoil(),
            TrigCurve::torus_spiral(2.0, 0.5, 2, 3),
            TrigCurve::circle(1.0),
        ] {
            assert!((c.position(0.0) - c.position(2.0)).norm() < 1e-12);
            assert!((c.velocity(0.0) - c.velocity(2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn torus_spiral_matches_product_form() {
        let c = TrigCurve::torus_spiral(2.0, 0.5, 2, 3);
        let t: f64 = 0.37;
        let s = PI * t;
        let r = 2.0 + 0.5 * (3.0 * s).cos();
        let expect = Vec3::new(r * (2.0 * s).cos(), r * (2.0 * s).sin(), 0.5 * (3.0 * s).sin());
        assert!((c.position(t) - expect).norm() < 1e-14);
    }

    #[test]
    fn circle_frenet_points_inward() {
        let g = GridSpec::new(32).unwrap();
        let c = TrigCurve::circle(1.5).sample_frenet(g).unwrap();
        for (p, v) in c.gamma().iter().zip(c.frame()) {
            assert!((p.normalize() + v).norm() < 1e-12);
        }
        assert!(TrigCurve::segment(2.0).sample_frenet(g).is_err());
    }

    #[test]
    fn warp_is_a_diffeomorphism() {
        let w = smooth_warp(0.5, 2);
        assert!(w(0.0).abs() < 1e-15 && (w(2.0) - 2.0).abs() < 1e-14);
        for i in 0..200 {
            let t = i as f64 / 100.0;
            assert!(w(t + 0.01) > w(t));
        }
    }
}
