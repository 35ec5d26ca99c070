//! Inner products, the elastic metric family on framed curves, and distances
//! on the sphere and the Grassmannian.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::curve::{FramedCurve, QuaternionPath, Vec3};
use crate::error::{Error, Result};
use crate::registration::svd_align;
use crate::stiefel::GrassmannPoint;

/// Tolerance on `|q|^2 = 2` for points of the sphere.
pub const SPHERE_TOL: f64 = 1e-6;
/// Relative tangency residual above which tangent fields are rejected.
pub const CONSTRAINT_TOL: f64 = 1e-4;

fn check_compatible(p: &QuaternionPath, q: &QuaternionPath) -> Result<()> {
    p.grid().ensure_same(&q.grid())?;
    if p.class() != q.class() {
        return Err(Error::ClosureMismatch);
    }
    Ok(())
}

/// `int Re(p conj(q)) dt`, the real L2 inner product of quaternionic paths.
pub fn l2_inner(p: &QuaternionPath, q: &QuaternionPath) -> Result<f64> {
    check_compatible(p, q)?;
    let values: Vec<f64> = p.samples().iter().zip(q.samples()).map(|(a, b)| a.dot(*b)).collect();
    Ok(p.grid().integrate(&values, p.class()))
}

/// `<s0(t), s1(t)>_{C^2} = z0 conj(z1) + w0 conj(w1)` at sample `i`.
pub fn pointwise_c2_inner(s0: &QuaternionPath, s1: &QuaternionPath, i: usize) -> Complex64 {
    let (z0, w0) = s0.samples()[i].to_complex_pair();
    let (z1, w1) = s1.samples()[i].to_complex_pair();
    z0 * z1.conj() + w0 * w1.conj()
}

/// `int <s0, s1>_{C^2} dt`; its real part is [`l2_inner`].
pub fn hermitian_inner(s0: &QuaternionPath, s1: &QuaternionPath) -> Result<Complex64> {
    check_compatible(s0, s1)?;
    let values: Vec<Complex64> = (0..s0.samples().len()).map(|i| pointwise_c2_inner(s0, s1, i)).collect();
    Ok(s0.grid().integrate(&values, s0.class()))
}

/// Weights of the elastic metric: normal bending along `V` (`a`), along
/// `T x V` (`b`), stretching (`c`) and twisting (`d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ElasticParams {
    pub const ONES: ElasticParams = ElasticParams {
        a: 1.0,
        b: 1.0,
        c: 1.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if [a, b, c, d].iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidArgument("elastic weights must be nonnegative".into()));
        }
        Ok(Self { a, b, c, d })
    }
}

/// A tangent vector `(nu, W)` to framed-curve space at a given curve: the
/// variation `nu` of the base curve (with its parameter derivative) and the
/// variation `W` of the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    pub nu: Vec<Vec3>,
    pub dnu: Vec<Vec3>,
    pub w: Vec<Vec3>,
}

impl TangentField {
    pub fn new(nu: Vec<Vec3>, dnu: Vec<Vec3>, w: Vec<Vec3>) -> Self {
        Self { nu, dnu, w }
    }

    /// Derives `nu'` with the grid's difference rule.
    pub fn from_variation(c: &FramedCurve, nu: Vec<Vec3>, w: Vec<Vec3>) -> Self {
        let dnu = c.grid().differentiate(&nu, c.closure().class());
        Self { nu, dnu, w }
    }

    pub fn zero(c: &FramedCurve) -> Self {
        let n = c.gamma().len();
        Self::new(vec![Vec3::zeros(); n], vec![Vec3::zeros(); n], vec![Vec3::zeros(); n])
    }

    /// Relative residual of `<nu', V> + <gamma', W> = 0` and `<W, V> = 0`.
    pub fn constraint_residual(&self, c: &FramedCurve) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..self.nu.len() {
            let v = c.frame()[i];
            let g = c.velocity()[i];
            let r1 = (self.dnu[i].dot(&v) + g.dot(&self.w[i])).abs();
            let r2 = self.w[i].dot(&v).abs() * g.norm();
            worst = worst.max(r1).max(r2);
            scale = scale.max(self.dnu[i].norm() + g.norm() * self.w[i].norm());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    fn check(&self, c: &FramedCurve) -> Result<()> {
        let len = c.gamma().len();
        for field in [&self.nu, &self.dnu, &self.w] {
            if field.len() != len {
                return Err(Error::SampleCount {
                    got: field.len(),
                    expected: len,
                });
            }
        }
        let residual = self.constraint_residual(c);
        if residual > CONSTRAINT_TOL {
            return Err(Error::ConstraintViolation { residual });
        }
        Ok(())
    }
}

/// The elastic metric `g^{a,b,c,d}` at `c`, evaluated on `(u, v)` by
/// polarization of
/// `int a<D_s nu, V>^2 + b<D_s nu, T x V>^2 + c<D_s nu, T>^2 + d<W, T x V>^2 ds`.
pub fn elastic_metric(c: &FramedCurve, u: &TangentField, v: &TangentField, p: ElasticParams) -> Result<f64> {
    u.check(c)?;
    v.check(c)?;
    let values: Vec<f64> = (0..c.gamma().len())
        .map(|i| {
            let speed = c.velocity()[i].norm();
            let t = c.tangent(i);
            let n = c.frame()[i];
            let b = c.binormal(i);
            let du = u.dnu[i] / speed;
            let dv = v.dnu[i] / speed;
            let bend = p.a * du.dot(&n) * dv.dot(&n) + p.b * du.dot(&b) * dv.dot(&b);
            let stretch = p.c * du.dot(&t) * dv.dot(&t);
            let twist = p.d * u.w[i].dot(&b) * v.w[i].dot(&b);
            (bend + stretch + twist) * speed
        })
        .collect();
    Ok(c.grid().integrate(&values, c.closure().class()))
}

/// `g^S = g^{1,1,1,1} / 4`, the metric pulled back to the flat L2 metric by
/// the frame-Hopf map.
pub fn g_s(c: &FramedCurve, u: &TangentField, v: &TangentField) -> Result<f64> {
    Ok(0.25 * elastic_metric(c, u, v, ElasticParams::ONES)?)
}

/// Angle between two paths on the sphere, `arccos(<q0, q1> / 2)`.
///
/// Evaluated as `atan2(|q1 - c q0|, c)` on the unit-normalized paths, which
/// keeps full relative accuracy near zero where `arccos` loses half the
/// digits.
pub(crate) fn sphere_angle(q0: &QuaternionPath, q1: &QuaternionPath, minimize_over_sign: bool) -> Result<f64> {
    let mut n = [0.0; 2];
    for (k, q) in [q0, q1].into_iter().enumerate() {
        let norm_sq = q.norm_sq();
        if !((norm_sq.sqrt() - SQRT_2).abs() <= SPHERE_TOL) {
            return Err(Error::NotOnSphere { norm_sq });
        }
        n[k] = norm_sq.sqrt();
    }
    let mut c = l2_inner(q0, q1)? / (n[0] * n[1]);
    let sign = if minimize_over_sign && c < 0.0 { -1.0 } else { 1.0 };
    c = (c * sign).clamp(-1.0, 1.0);
    let r: Vec<f64> = q0
        .samples()
        .iter()
        .zip(q1.samples())
        .map(|(a, b)| (*b * (sign / n[1]) - *a * (c / n[0])).norm_sq())
        .collect();
    let r = q0.grid().integrate(&r, q0.class()).max(0.0).sqrt();
    Ok(r.atan2(c))
}

/// Great-circle distance `sqrt(2) arccos(<q0, q1> / 2)` on the sphere of
/// radius `sqrt 2`. With `minimize_over_sign` the smaller of the distances to
/// `q1` and `-q1` is returned (both lifts map to the same framed curve).
pub fn sphere_distance(q0: &QuaternionPath, q1: &QuaternionPath, minimize_over_sign: bool) -> Result<f64> {
    Ok(SQRT_2 * sphere_angle(q0, q1, minimize_over_sign)?)
}

/// Distance on the Grassmannian with the two Jordan angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrassmannDistance {
    pub distance: f64,
    pub theta_z: f64,
    pub theta_w: f64,
}

/// `sqrt(theta_z^2 + theta_w^2)` from the Jordan angles between two planes.
///
/// The angles come from the singular values of the cross-Gram matrix
/// `G[j][k] = <b0_j, b1_k>`; they are evaluated from the aligned bases with
/// `atan2` so that small angles keep full relative accuracy.
pub fn grassmann_distance(p0: &GrassmannPoint, p1: &GrassmannPoint) -> Result<GrassmannDistance> {
    let aligned = svd_align(p0.representative(), p1.representative())?;
    Ok(GrassmannDistance {
        distance: aligned.theta_z.hypot(aligned.theta_w),
        theta_z: aligned.theta_z,
        theta_w: aligned.theta_w,
    })
}

/// Which space a raw distance was measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Sphere,
    Grassmann,
}

impl Space {
    /// Largest possible distance.
    pub fn diameter(self) -> f64 {
        match self {
            Space::Sphere => SQRT_2 * PI,
            Space::Grassmann => PI * FRAC_1_SQRT_2,
        }
    }
}

/// Distance scaled so the space has diameter one.
pub fn normalized_distance(raw: f64, space: Space) -> f64 {
    raw / space.diameter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ClosureClass, GridSpec};
    use crate::quat::Quat;

    #[test]
    fn constant_paths() {
        let g = GridSpec::new(16).unwrap();
        let one = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::ONE);
        let i = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::I);
        assert!((l2_inner(&one, &one).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(l2_inner(&one, &i).unwrap(), 0.0);
        assert!(sphere_distance(&one, &one, false).unwrap().abs() < 1e-15);
        assert!((sphere_distance(&one, &i, false).unwrap() - SQRT_2 * PI / 2.0).abs() < 1e-14);
        assert!(sphere_distance(&one, &one.negated(), true).unwrap() < 1e-15);
        assert!((sphere_distance(&one, &one.negated(), false).unwrap() - SQRT_2 * PI).abs() < 1e-7);
    }

    #[test]
    fn off_sphere_rejected() {
        let g = GridSpec::new(16).unwrap();
        let q = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::ONE * 2.0);
        assert!(matches!(sphere_distance(&q, &q, false), Err(Error::NotOnSphere { .. })));
    }

    #[test]
    fn mismatched_grids() {
        let a = QuaternionPath::from_fn(GridSpec::new(16).unwrap(), ClosureClass::Open, |_| Quat::ONE);
        let b = QuaternionPath::from_fn(GridSpec::new(32).unwrap(), ClosureClass::Open, |_| Quat::ONE);
        assert!(matches!(l2_inner(&a, &b), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalized_distance(0.0, Space::Sphere), 0.0);
        assert!((normalized_distance(PI / SQRT_2, Space::Grassmann) - 1.0).abs() < 1e-15);
        assert!((normalized_distance(SQRT_2 * PI / 2.0, Space::Sphere) - 0.5).abs() < 1e-15);
    }
}
