//! Optimal pointwise frame twisting, which quotients out the choice of
//! framing: `q1 -> u q1` with `u(t)` a unit complex scalar.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::metric::{l2_inner, pointwise_c2_inner};
use crate::registration::actions::{apply_twist, apply_twist_stiefel};
use crate::registration::align::svd_align;
use crate::stiefel::{Field, StiefelPoint};

/// Relative size below which the pointwise inner product counts as zero.
pub const TWIST_EPS: f64 = 1e-8;

/// Normalizes `c[i]`, collecting samples where `|c[i]| <= TWIST_EPS scale[i]`.
fn unit_field(c: Vec<Complex64>, scale: impl Fn(usize) -> f64) -> Result<Vec<Complex64>> {
    let bad: Vec<usize> = c
        .iter()
        .enumerate()
        .filter(|(i, v)| !(v.norm() > TWIST_EPS * scale(*i)))
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::PointwiseOrthogonal { samples: bad });
    }
    Ok(c.into_iter().map(|v| v / v.norm()).collect())
}

/// The twist `u = <q0, q1>_{C^2} / |<q0, q1>_{C^2}|` taking `q1` to its
/// closest point in the twist orbit.
pub fn twist_field(q0: &QuaternionPath, q1: &QuaternionPath) -> Result<Vec<Complex64>> {
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != q1.class() {
        return Err(Error::ClosureMismatch);
    }
    let c = (0..q0.samples().len()).map(|i| pointwise_c2_inner(q0, q1, i)).collect();
    unit_field(c, |i| q0.samples()[i].norm() * q1.samples()[i].norm())
}

/// `u q1` with the optimal twist `u`. For closed inputs of the same class the
/// twist is periodic, so the closure class is kept.
pub fn optimal_twist(q0: &QuaternionPath, q1: &QuaternionPath) -> Result<QuaternionPath> {
    apply_twist(q1, &twist_field(q0, q1)?)
}

fn stiefel_products(s0: &StiefelPoint, s1: &StiefelPoint, wz: f64, ww: f64) -> Vec<Complex64> {
    (0..s0.z().len())
        .map(|i| s0.z()[i] * s1.z()[i].conj() * wz + s0.w()[i] * s1.w()[i].conj() * ww)
        .collect()
}

fn pointwise_norm(s: &StiefelPoint, i: usize) -> f64 {
    s.z()[i].norm().hypot(s.w()[i].norm())
}

fn check_stiefel_pair(s0: &StiefelPoint, s1: &StiefelPoint) -> Result<()> {
    s0.grid().ensure_same(&s1.grid())?;
    if s0.class() != s1.class() {
        return Err(Error::ParityMismatch);
    }
    if s0.field() == Field::Real || s1.field() == Field::Real {
        return Err(Error::RealFieldTwist);
    }
    Ok(())
}

/// [`optimal_twist`] for Stiefel points; the result stays orthonormal.
pub fn optimal_twist_stiefel(s0: &StiefelPoint, s1: &StiefelPoint) -> Result<StiefelPoint> {
    check_stiefel_pair(s0, s1)?;
    let u = unit_field(stiefel_products(s0, s1, 1.0, 1.0), |i| {
        pointwise_norm(s0, i) * pointwise_norm(s1, i)
    })?;
    apply_twist_stiefel(s1, &u)
}

/// `theta / sin(theta)`, the speed factor of a circular arc.
fn arc_weight(theta: f64) -> f64 {
    if theta < 1e-8 {
        1.0
    } else {
        theta / theta.sin()
    }
}

/// Twist of `s1` making the Grassmann geodesic from `s0` horizontal.
///
/// With SVD-aligned bases the geodesic's initial velocity is
/// `(a_z (z1 - cos(theta_z) z0), a_w (w1 - cos(theta_w) w0))` with
/// `a = theta / sin(theta)`, so it is horizontal exactly when
/// `a_z z0 conj(z1) + a_w w0 conj(w1)` is real and positive. The alignment
/// itself depends on the twist, so the pointwise twist and the alignment are
/// iterated to a fixed point; the first pass uses unit weights and is the
/// plain pointwise twist. A pass is kept only if it does not increase the
/// distance.
///
/// Returns the twisted point and the accumulated twist field.
pub fn grassmann_twist(
    s0: &StiefelPoint,
    s1: &StiefelPoint,
    max_passes: usize,
) -> Result<(StiefelPoint, Vec<Complex64>)> {
    check_stiefel_pair(s0, s1)?;
    let mut cur = s1.clone();
    let mut total = vec![Complex64::from(1.0); s1.z().len()];
    let mut dist = svd_align(s0, &cur)?.distance();
    for pass in 0..max_passes {
        let al = svd_align(s0, &cur)?;
        let (wz, ww) = if pass == 0 {
            (1.0, 1.0)
        } else {
            (arc_weight(al.theta_z), arc_weight(al.theta_w))
        };
        let u = unit_field(stiefel_products(&al.s0, &al.s1, wz, ww), |i| {
            pointwise_norm(s0, i) * pointwise_norm(&cur, i)
        })?;
        let cand = apply_twist_stiefel(&cur, &u)?;
        let d = svd_align(s0, &cand)?.distance();
        if d > dist + 1e-14 {
            break;
        }
        let change = u.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max);
        cur = cand;
        dist = d;
        for (t, v) in total.iter_mut().zip(&u) {
            *t *= v;
        }
        if change < 1e-13 {
            break;
        }
    }
    Ok((cur, total))
}

/// Relative horizontality residual `max_t |Im<p(t), q0(t)>_{C^2}| / ||p||` of
/// the initial velocity `p` of the sphere geodesic from `q0` to `q1`.
///
/// Both paths must lie on the sphere. Fails with `SameOrbit` when the
/// velocity vanishes, i.e. `q1 = q0` after twisting.
pub fn horizontality_residual(q0: &QuaternionPath, q1: &QuaternionPath) -> Result<f64> {
    let cos = (l2_inner(q0, q1)? / 2.0).clamp(-1.0, 1.0);
    let theta = cos.acos();
    if theta < 1e-12 {
        return Err(Error::SameOrbit);
    }
    let scale = theta / theta.sin();
    let p = QuaternionPath::new(
        q0.grid(),
        q0.class(),
        q0.samples()
            .iter()
            .zip(q1.samples())
            .map(|(a, b)| (*b - *a * cos) * scale)
            .collect(),
    )?;
    let norm = p.norm_sq().sqrt();
    if !(norm > 1e-12) {
        return Err(Error::SameOrbit);
    }
    let worst = (0..p.samples().len())
        .map(|i| pointwise_c2_inner(&p, q0, i).im.abs())
        .fold(0.0, f64::max);
    Ok(worst / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ClosureClass, GridSpec};
    use crate::quat::Quat;

    fn path(g: GridSpec) -> QuaternionPath {
        QuaternionPath::from_fn(g, ClosureClass::Open, |t| {
            Quat::new(1.0, 0.5 * t, (3.0 * t).sin(), 0.2 - t)
        })
        .to_sphere()
    }

    #[test]
    fn same_orbit_collapses() {
        let g = GridSpec::new(64).unwrap();
        let q0 = path(g);
        let u: Vec<Complex64> = g
            .params(ClosureClass::Open)
            .iter()
            .map(|t| Complex64::from_polar(1.0, 2.0 * t.sin()))
            .collect();
        let q1 = apply_twist(&q0, &u).unwrap();
        let back = optimal_twist(&q0, &q1).unwrap();
        assert!(back.max_deviation(&q0) < 1e-12);
        assert_eq!(horizontality_residual(&q0, &back), Err(Error::SameOrbit));
    }

    #[test]
    fn orthogonal_samples_reported() {
        let g = GridSpec::new(16).unwrap();
        let q0 = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::ONE);
        let q1 = QuaternionPath::from_fn(g, ClosureClass::Open, |t| if t < 1.0 { Quat::ONE } else { Quat::J });
        match optimal_twist(&q0, &q1) {
            Err(Error::PointwiseOrthogonal { samples }) => assert_eq!(samples, (8..=16).collect::<Vec<_>>()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn twisted_result_is_horizontal() {
        let g = GridSpec::new(64).unwrap();
        let q0 = path(g);
        let q1 = QuaternionPath::from_fn(g, ClosureClass::Open, |t| Quat::new(0.8, t.cos(), 0.3, t)).to_sphere();
        let hat = optimal_twist(&q0, &q1).unwrap();
        assert!(horizontality_residual(&q0, &hat).unwrap() < 1e-12);
        let again = optimal_twist(&q0, &hat).unwrap();
        assert!(again.max_deviation(&hat) < 1e-12);
    }
}
