//! Explicit geodesics: great circles on the sphere of open-curve coordinates
//! and Neretin geodesics between 2-planes for closed curves, plus the
//! end-to-end pipelines that turn them into homotopies of framed curves.

use num_complex::Complex64;

use crate::curve::{hopf_map, BaseCurve, FramedCurve, QuaternionPath};
use crate::error::{Error, Result};
use crate::metric::{normalized_distance, sphere_angle};
use crate::planar::{planar_srt_inverse, PlanarCurve, PlanarRoot};
use crate::quat::Quat;
use crate::registration::{svd_align, Aligned, AlignedPair, DPConfig, RegistrationResult};
use crate::shape::{prepare, register_pair, Mode, ShapeInput};
use crate::stiefel::{Field, StiefelPoint};

/// Samples with `|q| <= SINGULAR_TOL max|q|` are flagged as singular.
pub const SINGULAR_TOL: f64 = 1e-8;
/// Angles below this are treated as zero in the interpolation formulas.
const ANGLE_EPS: f64 = 1e-10;
/// Distances below this make a geodesic constant.
const COINCIDENT: f64 = 1e-12;
/// Tolerance for reporting a Jordan angle of exactly a right angle.
const RIGHT_ANGLE_TOL: f64 = 1e-8;

fn check_u(u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("geodesic parameter {u} outside [0, 1]")));
    }
    Ok(())
}

/// Coefficients `(sin((1 - u) theta), sin(u theta)) / sin(theta)`, with the
/// linear limit for vanishing `theta`.
fn slerp_weights(theta: f64, u: f64) -> (f64, f64) {
    if theta < ANGLE_EPS {
        (1.0 - u, u)
    } else {
        let s = theta.sin();
        (((1.0 - u) * theta).sin() / s, (u * theta).sin() / s)
    }
}

/// The point at parameter `u` on the great circle from `q0` to `q1`.
///
/// Fails when the endpoints coincide or are antipodal (the great circle is
/// then not unique or degenerate). Endpoints are returned exactly.
pub fn sphere_geodesic(q0: &QuaternionPath, q1: &QuaternionPath, u: f64) -> Result<QuaternionPath> {
    check_u(u)?;
    let theta = sphere_angle(q0, q1, false)?;
    if theta.sin() < 1e-10 {
        return Err(Error::AntipodalOrCoincident);
    }
    if u == 0.0 {
        return Ok(q0.clone());
    }
    if u == 1.0 {
        return Ok(q1.clone());
    }
    let (a, b) = slerp_weights(theta, u);
    QuaternionPath::new(
        q0.grid(),
        q0.class(),
        q0.samples()
            .iter()
            .zip(q1.samples())
            .map(|(x, y)| *x * a + *y * b)
            .collect(),
    )
}

/// The point at parameter `u` on the Neretin geodesic between the planes of
/// an SVD-aligned pair: each aligned coordinate moves on its own circle,
/// `z_u = (sin((1 - u) theta_z) z0 + sin(u theta_z) z1) / sin(theta_z)` and
/// likewise for `w`. The result is orthonormal and in the inputs' class.
pub fn grassmann_geodesic(aligned: &AlignedPair, u: f64) -> Result<StiefelPoint> {
    check_u(u)?;
    let mix = |x: &[Complex64], y: &[Complex64], theta: f64| -> Vec<Complex64> {
        let (a, b) = slerp_weights(theta, u);
        x.iter().zip(y).map(|(p, q)| p * a + q * b).collect()
    };
    let (s0, s1) = (&aligned.s0, &aligned.s1);
    let z = mix(s0.z(), s1.z(), aligned.theta_z);
    let w = mix(s0.w(), s1.w(), aligned.theta_w);
    Ok(s0.with_coords(z, w))
}

/// `d/du` of [`grassmann_geodesic`].
pub fn grassmann_geodesic_velocity(aligned: &AlignedPair, u: f64) -> Result<StiefelPoint> {
    check_u(u)?;
    let rate = |x: &[Complex64], y: &[Complex64], theta: f64| -> Vec<Complex64> {
        let (a, b) = if theta < ANGLE_EPS {
            (-1.0, 1.0)
        } else {
            let s = theta.sin();
            (-theta * ((1.0 - u) * theta).cos() / s, theta * (u * theta).cos() / s)
        };
        x.iter().zip(y).map(|(p, q)| p * a + q * b).collect()
    };
    let (s0, s1) = (&aligned.s0, &aligned.s1);
    let z = rate(s0.z(), s1.z(), aligned.theta_z);
    let w = rate(s0.w(), s1.w(), aligned.theta_w);
    Ok(s0.with_coords(z, w))
}

/// Relative horizontality residual `max_t |Im<dq/du, q_u>_{C^2}| / ||dq/du||`
/// of the Neretin geodesic at `u`. Zero for geodesics that are orthogonal to
/// every frame-twisting direction.
pub fn grassmann_horizontality(aligned: &AlignedPair, u: f64) -> Result<f64> {
    let p = grassmann_geodesic(aligned, u)?;
    let v = grassmann_geodesic_velocity(aligned, u)?;
    let grid = p.grid();
    let speed = (crate::stiefel::inner(grid, v.z(), v.z()).re + crate::stiefel::inner(grid, v.w(), v.w()).re).sqrt();
    if !(speed > 0.0) {
        return Ok(0.0);
    }
    let worst = (0..p.z().len())
        .map(|i| (v.z()[i] * p.z()[i].conj() + v.w()[i] * p.w()[i].conj()).im.abs())
        .fold(0.0, f64::max);
    Ok(worst / speed)
}

/// Samples of `q` that are (numerically) zero.
pub fn singular_samples(q: &QuaternionPath) -> Vec<usize> {
    let max = q.samples().iter().map(|s| s.norm()).fold(0.0, f64::max);
    q.samples()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.norm() <= SINGULAR_TOL * max)
        .map(|(i, _)| i)
        .collect()
}

/// Replaces singular samples by tiny multiples of a neighbouring direction so
/// the frame-Hopf map stays defined; the curve is unchanged to first order.
fn regularized(q: &QuaternionPath, bad: &[usize]) -> QuaternionPath {
    if bad.is_empty() {
        return q.clone();
    }
    let s = q.samples();
    let max = s.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let floor = SINGULAR_TOL * max.max(1.0);
    q.map(|i, x| {
        if !bad.contains(&i) {
            return x;
        }
        let neighbour = (1..s.len())
            .flat_map(|k| [i.checked_sub(k), Some(i + k)])
            .flatten()
            .filter(|j| *j < s.len() && !bad.contains(j))
            .map(|j| s[j])
            .next()
            .unwrap_or(Quat::ONE);
        neighbour.normalize() * floor
    })
}

/// Coordinates of the steps of a geodesic.
#[derive(Debug, Clone, PartialEq)]
pub enum Steps {
    Sphere(Vec<QuaternionPath>),
    Grassmann(Vec<StiefelPoint>),
}

impl Steps {
    pub fn len(&self) -> usize {
        match self {
            Steps::Sphere(v) => v.len(),
            Steps::Grassmann(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self, k: usize) -> QuaternionPath {
        match self {
            Steps::Sphere(v) => v[k].clone(),
            Steps::Grassmann(v) => v[k].to_path(),
        }
    }
}

/// A sampled geodesic between two shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub mode: Mode,
    /// Parameters `u_k = k / m`.
    pub params: Vec<f64>,
    pub steps: Steps,
    /// The framed curve of every step. Plane curves lie in the xy-plane with
    /// the constant normal `e_z`; in unframed modes the frame is the optimal
    /// one found by registration.
    pub curves: Vec<FramedCurve>,
    /// Geodesic distance in the coordinate space.
    pub distance: f64,
    /// `distance` divided by the diameter of the space.
    pub normalized_distance: f64,
    /// Jordan angles `(theta_z, theta_w)` for closed modes.
    pub jordan_angles: Option<(f64, f64)>,
    pub registration: RegistrationResult,
    /// The moving curve's frame got a full turn to fix its linking parity.
    pub half_twisted: bool,
    /// Steps containing singular samples, with the offending sample indices.
    pub singular_steps: Vec<(usize, Vec<usize>)>,
    /// A Jordan angle equals a right angle: the planes share no direction in
    /// that coordinate (the geodesic is still valid but not unique).
    pub right_angle: bool,
}

impl GeodesicPath {
    /// Base curves of the homotopy.
    pub fn base_curves(&self) -> Vec<BaseCurve> {
        self.curves.iter().map(|c| c.base().clone()).collect()
    }
}

fn step_curve(mode: Mode, step: &Aligned, singular: &mut Vec<usize>) -> Result<FramedCurve> {
    if let Aligned::Stiefel(p) = step {
        if p.field() == Field::Real {
            let root = PlanarRoot::from_stiefel(p)?;
            return planar_srt_inverse(&root)?.to_framed();
        }
    }
    debug_assert!(mode != Mode::Planar);
    let q = step.to_path();
    *singular = singular_samples(&q);
    hopf_map(&regularized(&q, singular))
}

/// Geodesic with `m` segments between prepared coordinates (see
/// [`prepare`]), registering `p1` onto `p0` first.
pub fn geodesic_between(p0: &Aligned, p1: &Aligned, mode: Mode, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    if m < 1 {
        return Err(Error::InvalidArgument("a geodesic needs at least one step".into()));
    }
    let pair = register_pair(p0, p1, mode, cfg)?;
    let reg = pair.result;
    let params: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
    let coincident = reg.distance <= COINCIDENT;
    let mut jordan_angles = None;
    let mut right_angle = false;
    let (steps, distance) = match (&pair.fixed, &reg.aligned) {
        (Aligned::Path(q0), Aligned::Path(q1)) => {
            let steps = if coincident {
                vec![q0.clone(); m + 1]
            } else {
                params
                    .iter()
                    .map(|u| sphere_geodesic(q0, q1, *u))
                    .collect::<Result<Vec<_>>>()?
            };
            (Steps::Sphere(steps), reg.distance)
        }
        (Aligned::Stiefel(s0), Aligned::Stiefel(s1)) => {
            let al = svd_align(s0, s1)?;
            jordan_angles = Some((al.theta_z, al.theta_w));
            right_angle = (al.theta_w - std::f64::consts::FRAC_PI_2).abs() <= RIGHT_ANGLE_TOL;
            // express every step in the basis of s0, so step 0 is s0 itself
            let back = al.a.adjoint();
            let steps = if coincident {
                vec![s0.clone(); m + 1]
            } else {
                params
                    .iter()
                    .map(|u| grassmann_geodesic(&al, *u)?.rebased(&back))
                    .collect::<Result<Vec<_>>>()?
            };
            (Steps::Grassmann(steps), al.distance())
        }
        _ => unreachable!("registration keeps the coordinate type"),
    };
    let mut curves = Vec::with_capacity(m + 1);
    let mut singular_steps = Vec::new();
    for k in 0..=m {
        let step = match &steps {
            Steps::Sphere(v) => Aligned::Path(v[k].clone()),
            Steps::Grassmann(v) => Aligned::Stiefel(v[k].clone()),
        };
        let mut bad = Vec::new();
        curves.push(step_curve(mode, &step, &mut bad)?);
        if !bad.is_empty() {
            singular_steps.push((k, bad));
        }
    }
    Ok(GeodesicPath {
        mode,
        params,
        steps,
        curves,
        distance,
        normalized_distance: normalized_distance(distance, mode.space()),
        jordan_angles,
        registration: reg,
        half_twisted: pair.half_twisted,
        singular_steps,
        right_angle,
    })
}

/// Geodesic with `m` segments between two curves in the shape space of
/// `mode`.
pub fn geodesic(c0: &ShapeInput, c1: &ShapeInput, mode: Mode, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic_between(&prepare(c0, mode)?, &prepare(c1, mode)?, mode, m, cfg)
}

/// Geodesic between open framed curves modulo translation, scale, rotation
/// and reparameterization. The sign ambiguity of the lifts is absorbed by
/// the rotation step, which ranges over all unit quaternions including `-1`.
pub fn geodesic_open_framed(c0: &FramedCurve, c1: &FramedCurve, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic(
        &ShapeInput::Framed(c0.clone()),
        &ShapeInput::Framed(c1.clone()),
        Mode::OpenFramed,
        m,
        cfg,
    )
}

/// Geodesic between open curves, also modulo frame twisting.
pub fn geodesic_open_unframed(c0: &BaseCurve, c1: &BaseCurve, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic(
        &ShapeInput::Base(c0.clone()),
        &ShapeInput::Base(c1.clone()),
        Mode::OpenUnframed,
        m,
        cfg,
    )
}

/// Geodesic between closed framed curves of equal linking parity; every step
/// is a closed framed curve.
pub fn geodesic_closed_framed(c0: &FramedCurve, c1: &FramedCurve, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic(
        &ShapeInput::Framed(c0.clone()),
        &ShapeInput::Framed(c1.clone()),
        Mode::ClosedFramed,
        m,
        cfg,
    )
}

/// Geodesic between closed curves modulo frame twisting, starting from
/// rotation-minimizing framings.
pub fn geodesic_closed_unframed(c0: &BaseCurve, c1: &BaseCurve, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic(
        &ShapeInput::Base(c0.clone()),
        &ShapeInput::Base(c1.clone()),
        Mode::ClosedUnframed,
        m,
        cfg,
    )
}

/// Geodesic between closed plane curves.
pub fn geodesic_planar(c0: &PlanarCurve, c1: &PlanarCurve, m: usize, cfg: &DPConfig) -> Result<GeodesicPath> {
    geodesic(
        &ShapeInput::Planar(c0.clone()),
        &ShapeInput::Planar(c1.clone()),
        Mode::Planar,
        m,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ClosureClass, GridSpec};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn midpoint_of_one_and_i() {
        let g = GridSpec::new(16).unwrap();
        let one = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::ONE);
        let i = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::I);
        let mid = sphere_geodesic(&one, &i, 0.5).unwrap();
        let expected = Quat::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
        assert!(mid.samples().iter().all(|q| (*q - expected).norm() < 1e-15));
        assert_eq!(sphere_geodesic(&one, &one, 0.5), Err(Error::AntipodalOrCoincident));
    }

    fn mode(g: GridSpec, k: f64) -> Vec<Complex64> {
        g.params(ClosureClass::Loop)
            .iter()
            .map(|t| Complex64::from_polar(FRAC_1_SQRT_2, PI * k * t))
            .collect()
    }

    #[test]
    fn midpoint_between_orthogonal_fourier_planes() {
        let g = GridSpec::new(32).unwrap();
        let p = |a, b| StiefelPoint::new(Field::Complex, g, ClosureClass::Loop, mode(g, a), mode(g, b)).unwrap();
        let al = svd_align(&p(0.0, 1.0), &p(2.0, 3.0)).unwrap();
        assert!((al.distance() - PI * FRAC_1_SQRT_2).abs() < 1e-12);
        let mid = grassmann_geodesic(&al, 0.5).unwrap();
        assert!(mid.residual() < 1e-12);
        // the midpoint plane contains (e0 + e2)/sqrt 2 and (e1 + e3)/sqrt 2
        let target = StiefelPoint::new(
            Field::Complex,
            g,
            ClosureClass::Loop,
            mode(g, 0.0)
                .iter()
                .zip(mode(g, 2.0))
                .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
                .collect(),
            mode(g, 1.0)
                .iter()
                .zip(mode(g, 3.0))
                .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
                .collect(),
        )
        .unwrap();
        assert!(svd_align(&mid, &target).unwrap().distance() < 1e-7);
    }
}
