//! Frame constructions on a base curve: rotation-minimizing frames by the
//! double-reflection method, and Frenet frames.

use crate::curve::{BaseCurve, Closure, FramedCurve, Vec3};
use crate::error::{Error, Result};

/// Reflection of `v` in the plane with normal `n` (`c = |n|^2`).
fn reflect(v: &Vec3, n: &Vec3, c: f64) -> Vec3 {
    v - n * (2.0 * n.dot(v) / c)
}

/// Initial normal: the projection of `x` onto the normal plane of `t`, or of
/// `y` if `x` is (nearly) tangent.
fn initial_normal(t: &Vec3) -> Vec3 {
    for e in [Vec3::x(), Vec3::y()] {
        let p = e - t * t.dot(&e);
        if p.norm() > 1e-6 {
            return p.normalize();
        }
    }
    unreachable!("x and y cannot both be parallel to a unit vector")
}

/// One double-reflection step carrying `r` from `(x0, t0)` to `(x1, t1)`.
fn transport(x0: &Vec3, t0: &Vec3, r: &Vec3, x1: &Vec3, t1: &Vec3) -> Vec3 {
    let v1 = x1 - x0;
    let c1 = v1.norm_squared();
    let (r_l, t_l) = if c1 > 0.0 {
        (reflect(r, &v1, c1), reflect(t0, &v1, c1))
    } else {
        (*r, *t0)
    };
    let v2 = t1 - t_l;
    let c2 = v2.norm_squared();
    let out = if c2 > 0.0 { reflect(&r_l, &v2, c2) } else { r_l };
    // re-project to absorb rounding drift
    (out - t1 * t1.dot(&out)).normalize()
}

/// Rotation-minimizing (Bishop) frame.
///
/// The frame starts from the projection of `(1, 0, 0)` onto the first normal
/// plane. On a closed curve the transported frame generally fails to close by
/// a holonomy angle; with `close_frame` that angle is removed by a rotation
/// growing linearly along the curve, which yields a periodic frame with
/// constant twist rate.
pub fn rmf_frame(c: &BaseCurve, close_frame: bool) -> Result<FramedCurve> {
    let len = c.gamma().len();
    let x = c.gamma();
    let t: Vec<Vec3> = (0..len).map(|i| c.tangent(i)).collect();
    let mut frame = Vec::with_capacity(len);
    frame.push(initial_normal(&t[0]));
    for i in 1..len {
        let r = transport(&x[i - 1], &t[i - 1], &frame[i - 1], &x[i], &t[i]);
        frame.push(r);
    }
    if c.closure() == Closure::Closed && close_frame {
        let last = len - 1;
        let end = transport(&x[last], &t[last], &frame[last], &x[0], &t[0]);
        let start = frame[0];
        // angle taking the transported frame back to the initial one
        let holonomy = t[0].cross(&end).dot(&start).atan2(end.dot(&start));
        for (i, r) in frame.iter_mut().enumerate() {
            let a = holonomy * i as f64 / len as f64;
            let b = t[i].cross(r);
            *r = *r * a.cos() + b * a.sin();
        }
    }
    FramedCurve::with_projected_frame(c.clone(), frame)
}

/// Frenet frame: `V` is the principal normal, computed from the velocity's
/// derivative. Fails where the curvature drops below `1e-8`.
pub fn frenet_frame(c: &BaseCurve) -> Result<FramedCurve> {
    let accel = c.grid().differentiate(c.velocity(), c.closure().class());
    let mut frame = Vec::with_capacity(accel.len());
    for (i, a) in accel.iter().enumerate() {
        let v = c.velocity()[i];
        let t = v / v.norm();
        let n = a - t * t.dot(a);
        let curvature = n.norm() / v.norm_squared();
        if !(curvature > 1e-8) {
            return Err(Error::VanishingCurvature { index: i });
        }
        frame.push(n / n.norm());
    }
    FramedCurve::with_projected_frame(c.clone(), frame)
}

/// Twist rate `<D_s V, T x V>` of a framed curve, by differentiating the
/// frame on the grid.
pub fn twist_rate(c: &FramedCurve) -> Vec<f64> {
    let dv = c.grid().differentiate(c.frame(), c.closure().class());
    dv.iter()
        .enumerate()
        .map(|(i, d)| d.dot(&c.binormal(i)) / c.velocity()[i].norm())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::synth::TrigCurve;

    #[test]
    fn planar_rmf_stays_in_plane() {
        let g = GridSpec::new(128).unwrap();
        let base = TrigCurve::ellipse(2.0, 1.0).sample(g).unwrap();
        let c = rmf_frame(&base, false).unwrap();
        assert!(c.frame().iter().all(|v| v.z.abs() < 1e-14));
        assert!(twist_rate(&c).iter().all(|w| w.abs() < 1e-8));
    }

    #[test]
    fn circle_frenet_points_to_centre() {
        let g = GridSpec::new(64).unwrap();
        let base = TrigCurve::circle(1.0).sample(g).unwrap();
        let c = frenet_frame(&base).unwrap();
        for (p, v) in c.gamma().iter().zip(c.frame()) {
            assert!((p + v).norm() < 1e-5);
        }
    }

    #[test]
    fn straight_line_has_no_frenet_frame() {
        let g = GridSpec::new(16).unwrap();
        let base = TrigCurve::segment(2.0).sample(g).unwrap();
        assert!(matches!(frenet_frame(&base), Err(Error::VanishingCurvature { .. })));
        let r = rmf_frame(&base, false).unwrap();
        assert!(r.frame().iter().all(|v| (v - Vec3::y()).norm() < 1e-15));
    }

    /// Largest deviation of the twist per unit parameter from its mean.
    fn twist_spread(n: usize) -> f64 {
        let g = GridSpec::new(n).unwrap();
        let base = TrigCurve::trefoil().sample(g).unwrap();
        let c = rmf_frame(&base, true).unwrap();
        let w: Vec<f64> = twist_rate(&c)
            .iter()
            .zip(c.velocity())
            .map(|(r, v)| r * v.norm())
            .collect();
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        w.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn closed_rmf_has_constant_twist() {
        // the double-reflection frame is second-order accurate
        let coarse = twist_spread(256);
        let fine = twist_spread(512);
        assert!(coarse < 2e-4, "{coarse}");
        assert!(fine < coarse / 3.5, "{coarse} {fine}");
    }
}
