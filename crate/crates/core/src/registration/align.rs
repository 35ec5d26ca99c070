//! Rigid alignment: the optimal SU(2) rotation of open paths and the SVD
//! alignment of 2-planes.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::linalg::{conj, svd2, C2x2};
use crate::quat::Quat;
use crate::stiefel::{cross_gram, inner, StiefelPoint};

/// The unit quaternion `A` maximizing `<q0, q1 A>`, i.e. the rotation that
/// best aligns `q1` with `q0`: the normalization of `int conj(q1) q0 dt`.
///
/// For `q1 = q0 B` this returns `conj(B)`, undoing `B`.
pub fn optimal_rotation(q0: &QuaternionPath, q1: &QuaternionPath) -> Result<Quat> {
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != q1.class() {
        return Err(Error::ClosureMismatch);
    }
    let products: Vec<Quat> = q0
        .samples()
        .iter()
        .zip(q1.samples())
        .map(|(a, b)| b.conj() * *a)
        .collect();
    let m = q0.grid().integrate(&products, q0.class());
    if !(m.norm() > 1e-10) {
        return Err(Error::OrthogonalInputs);
    }
    Ok(m.normalize())
}

/// Two planes expressed in SVD-aligned orthonormal bases.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    /// `S0 a`, a basis of the first plane.
    pub s0: StiefelPoint,
    /// `S1 b`, a basis of the second plane.
    pub s1: StiefelPoint,
    /// Smaller Jordan angle, paired with the `z` coordinates.
    pub theta_z: f64,
    /// Larger Jordan angle, paired with the `w` coordinates.
    pub theta_w: f64,
    pub a: C2x2,
    pub b: C2x2,
}

impl AlignedPair {
    pub fn distance(&self) -> f64 {
        self.theta_z.hypot(self.theta_w)
    }

    /// The unitary `b a*` taking the second input basis to the one that best
    /// matches the first input basis (`S1 b a*`).
    pub fn procrustes(&self) -> C2x2 {
        self.b * self.a.adjoint()
    }
}

/// Angle between unit vectors `x` and `y` given `c = Re<x, y>`, computed as
/// `atan2(|y - c x|, c)` for full accuracy at small angles.
fn angle(grid: crate::grid::GridSpec, x: &[Complex64], y: &[Complex64], c: f64) -> f64 {
    let r: Vec<Complex64> = y.iter().zip(x).map(|(b, a)| b - a * c).collect();
    inner(grid, &r, &r).re.max(0.0).sqrt().atan2(c)
}

/// Rotates orthonormal bases of two planes so that the cross inner products
/// become diagonal, real and nonnegative: `<z0, z1> = cos theta_z`,
/// `<w0, w1> = cos theta_w`, `<z0, w1> = <w0, z1> = 0`, with
/// `theta_z <= theta_w`.
///
/// With the SVD `G = U diag(s) W*` of the cross-Gram matrix the new bases are
/// `S0 conj(U)` and `S1 conj(W)`.
pub fn svd_align(s0: &StiefelPoint, s1: &StiefelPoint) -> Result<AlignedPair> {
    s0.grid().ensure_same(&s1.grid())?;
    if s0.field() != s1.field() {
        return Err(Error::FieldMismatch);
    }
    if s0.class() != s1.class() {
        return Err(Error::ParityMismatch);
    }
    let g = cross_gram(s0, s1);
    let svd = svd2(&g);
    let a = conj(&svd.u);
    let b = conj(&svd.w);
    let t0 = s0.rebased(&a)?;
    let t1 = s1.rebased(&b)?;
    let grid = s0.grid();
    let cz = svd.s[0].min(1.0);
    let cw = svd.s[1].min(1.0);
    let theta_z = angle(grid, t0.z(), t1.z(), cz);
    let theta_w = angle(grid, t0.w(), t1.w(), cw);
    Ok(AlignedPair {
        s0: t0,
        s1: t1,
        theta_z,
        theta_w: theta_w.max(theta_z),
        a,
        b,
    })
}

/// Splits a unitary `m = e^{i phi} m_su` with `m_su` special unitary and
/// returns the unit quaternion of `m_su` (acting by right multiplication on
/// `z + w j`) together with the global twist angle `2 phi`.
///
/// The factorization is determined up to the shared sign `(-1, phi + pi)`.
pub fn split_unitary(m: &C2x2) -> (Quat, f64) {
    let det = m.determinant();
    let phi = 0.5 * det.arg();
    let su = m * Complex64::from_polar(1.0, -phi);
    // right multiplication by a + b j acts as [[a, b], [-conj b, conj a]]
    let q = Quat::from_complex_pair(su[(0, 0)], su[(0, 1)]);
    (q.normalize(), 2.0 * phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ClosureClass, GridSpec};
    use crate::stiefel::Field;
    use std::f64::consts::PI;

    fn mode(grid: GridSpec, k: f64) -> Vec<Complex64> {
        grid.params(ClosureClass::Loop)
            .iter()
            .map(|t| Complex64::from_polar(1.0 / 2f64.sqrt(), PI * k * t))
            .collect()
    }

    fn plane(g: GridSpec, a: f64, b: f64) -> StiefelPoint {
        StiefelPoint::new(Field::Complex, g, ClosureClass::Loop, mode(g, a), mode(g, b)).unwrap()
    }

    #[test]
    fn rotation_undoes_known_rotation() {
        let g = GridSpec::new(32).unwrap();
        let q0 = QuaternionPath::from_fn(g, ClosureClass::Open, |t| Quat::new(1.0, t, t * t, 0.5 - t));
        let b = Quat::new(0.3, -0.2, 0.9, 0.1).normalize();
        let q1 = q0.map(|_, s| s * b);
        let a = optimal_rotation(&q0, &q1).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        assert_eq!(optimal_rotation(&q0, &q0).unwrap(), Quat::ONE);
    }

    #[test]
    fn shared_direction_fourier_planes() {
        let g = GridSpec::new(32).unwrap();
        let al = svd_align(&plane(g, 0.0, 1.0), &plane(g, 1.0, 2.0)).unwrap();
        assert!(al.theta_z.abs() < 1e-12);
        assert!((al.theta_w - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unitary_split_round_trip() {
        let q = Quat::new(0.2, 0.5, -0.4, 0.7).normalize();
        let (a, b) = q.to_complex_pair();
        let su = C2x2::new(a, b, -b.conj(), a.conj());
        let m = su * Complex64::from_polar(1.0, 0.3);
        let (r, twist) = split_unitary(&m);
        assert!((twist - 0.6).abs() < 1e-12);
        assert!((r - q).norm() < 1e-12);
    }
}
