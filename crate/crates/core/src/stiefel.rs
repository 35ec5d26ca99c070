//! Orthonormal 2-frames of periodic functions and the 2-planes they span.
//!
//! A closed framed curve of length 2 has quaternionic coordinates `(z, w)`
//! that are L2-orthonormal; the pair is a point of a Stiefel manifold, and
//! its span (modulo rotations and the global twist) a point of a
//! Grassmannian.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::grid::{periodic_value, ClosureClass, GridSpec};
use crate::linalg::{inv_sqrt, C2x2};

/// Tolerance of the orthonormality constraints.
pub const STIEFEL_TOL: f64 = 1e-8;
/// Largest pre-projection residual accepted by [`to_stiefel`].
pub const MAX_CLOSURE_RESIDUAL: f64 = 1e-3;
/// Largest L2 displacement accepted by [`to_stiefel`].
pub const MAX_PROJECTION_DISPLACEMENT: f64 = 1e-4;

/// Scalar field of the coordinate functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// Planar curves: both coordinates are real-valued.
    Real,
    Complex,
}

/// Hermitian L2 inner product `int a conj(b)` of two periodic sample arrays.
pub fn inner(grid: GridSpec, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let sum: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    sum * grid.dt()
}

/// An L2-orthonormal pair `(z, w)` of periodic (or anti-periodic) functions.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint {
    field: Field,
    grid: GridSpec,
    class: ClosureClass,
    z: Vec<Complex64>,
    w: Vec<Complex64>,
}

impl StiefelPoint {
    /// Validates closure class, sample counts, field and orthonormality.
    pub fn new(
        field: Field,
        grid: GridSpec,
        class: ClosureClass,
        z: Vec<Complex64>,
        w: Vec<Complex64>,
    ) -> Result<Self> {
        let p = Self::unchecked(field, grid, class, z, w)?;
        let residual = p.residual();
        if !(residual <= STIEFEL_TOL) {
            return Err(Error::ClosureViolation { residual });
        }
        Ok(p)
    }

    /// Checks everything except orthonormality.
    pub(crate) fn unchecked(
        field: Field,
        grid: GridSpec,
        class: ClosureClass,
        z: Vec<Complex64>,
        w: Vec<Complex64>,
    ) -> Result<Self> {
        if !class.is_closed() {
            return Err(Error::NotClosed);
        }
        grid.check_len(&z, class)?;
        grid.check_len(&w, class)?;
        if field == Field::Real && z.iter().chain(&w).any(|c| c.im != 0.0) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self {
            field,
            grid,
            class,
            z,
            w,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn class(&self) -> ClosureClass {
        self.class
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    pub fn basis(&self) -> [&[Complex64]; 2] {
        [&self.z, &self.w]
    }

    /// `G[j][k] = <b_j, b_k>` for the basis `(z, w)`.
    pub fn gram(&self) -> C2x2 {
        cross_gram(self, self)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn residual(&self) -> f64 {
        (self.gram() - C2x2::identity())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// The quaternionic path `z + w j` (squared L2 norm 2).
    pub fn to_path(&self) -> QuaternionPath {
        QuaternionPath::from_complex(self.grid, self.class, &self.z, &self.w)
            .expect("lengths validated at construction")
    }

    /// The basis `(z, w) m`, i.e. `b'_k = sum_j b_j m[j][k]`.
    ///
    /// Real points accept only real matrices.
    pub fn rebased(&self, m: &C2x2) -> Result<Self> {
        if self.field == Field::Real && m.iter().any(|c| c.im != 0.0) {
            return Err(Error::FieldMismatch);
        }
        let (z, w) = combine(&self.z, &self.w, m);
        Ok(Self { z, w, ..self.clone() })
    }

    pub(crate) fn with_coords(&self, z: Vec<Complex64>, w: Vec<Complex64>) -> Self {
        Self { z, w, ..self.clone() }
    }

    /// Cyclic shift by `s` samples: `b(t) -> b(t + s dt)`, with the sign flip
    /// of anti-loops applied across the wraparound.
    pub fn shifted(&self, s: isize) -> Self {
        let sign = self.class.wrap_sign();
        let n = self.z.len() as isize;
        let shift = |v: &[Complex64]| (0..n).map(|i| periodic_value(v, sign, i + s)).collect();
        Self {
            z: shift(&self.z),
            w: shift(&self.w),
            ..self.clone()
        }
    }
}

/// `(z, w) m` for a 2x2 matrix `m`.
pub(crate) fn combine(z: &[Complex64], w: &[Complex64], m: &C2x2) -> (Vec<Complex64>, Vec<Complex64>) {
    let nz = z.iter().zip(w).map(|(a, b)| a * m[(0, 0)] + b * m[(1, 0)]).collect();
    let nw = z.iter().zip(w).map(|(a, b)| a * m[(0, 1)] + b * m[(1, 1)]).collect();
    (nz, nw)
}

/// `G[j][k] = <a_j, b_k>` between the bases of two points.
pub fn cross_gram(a: &StiefelPoint, b: &StiefelPoint) -> C2x2 {
    let g = a.grid;
    let [a0, a1] = a.basis();
    let [b0, b1] = b.basis();
    C2x2::new(inner(g, a0, b0), inner(g, a0, b1), inner(g, a1, b0), inner(g, a1, b1))
}

/// A 2-plane, represented by any orthonormal basis of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoint(StiefelPoint);

impl GrassmannPoint {
    pub fn new(representative: StiefelPoint) -> Self {
        Self(representative)
    }

    pub fn representative(&self) -> &StiefelPoint {
        &self.0
    }

    pub fn into_representative(self) -> StiefelPoint {
        self.0
    }
}

impl From<StiefelPoint> for GrassmannPoint {
    fn from(p: StiefelPoint) -> Self {
        Self(p)
    }
}

/// The change of basis `m` with `(z, w) m` orthonormal and spanning the same
/// plane.
pub(crate) fn orthonormalizer(p: &StiefelPoint) -> Result<C2x2> {
    let g = p.gram();
    // b'_k = sum_j b_j m[j][k] has Gram m^T G conj(m); m = conj(G^{-1/2})
    // makes it the identity.
    let m = inv_sqrt(&g)
        .ok_or(Error::ClosureViolation { residual: p.residual() })?
        .map(|c| c.conj());
    Ok(if p.field == Field::Real {
        m.map(|c| Complex64::from(c.re))
    } else {
        m
    })
}

/// Replaces `(z, w)` by `(z, w) G^{-1/2}`, the closest orthonormal pair
/// spanning the same plane. Returns the projected point and the L2 size of
/// the displacement.
pub fn orthonormalize(p: &StiefelPoint) -> Result<(StiefelPoint, f64)> {
    let out = p.rebased(&orthonormalizer(p)?)?;
    let dz: Vec<Complex64> = out.z.iter().zip(&p.z).map(|(a, b)| a - b).collect();
    let dw: Vec<Complex64> = out.w.iter().zip(&p.w).map(|(a, b)| a - b).collect();
    let displacement = (inner(p.grid, &dz, &dz).re + inner(p.grid, &dw, &dw).re).sqrt();
    Ok((out, displacement))
}

/// Complex coordinates of a closed quaternionic path, projected onto the
/// orthonormality constraints.
///
/// The input must already be (nearly) the lift of a closed length-2 curve:
/// a Gram residual above [`MAX_CLOSURE_RESIDUAL`] or a projection
/// displacement above [`MAX_PROJECTION_DISPLACEMENT`] is reported as a
/// closure violation.
pub fn to_stiefel(q: &QuaternionPath) -> Result<StiefelPoint> {
    if !q.class().is_closed() {
        return Err(Error::NotClosed);
    }
    let raw = StiefelPoint::unchecked(Field::Complex, q.grid(), q.class(), q.z(), q.w())?;
    project_checked(&raw)
}

pub(crate) fn project_checked(raw: &StiefelPoint) -> Result<StiefelPoint> {
    let residual = raw.residual();
    if !(residual <= MAX_CLOSURE_RESIDUAL) {
        return Err(Error::ClosureViolation { residual });
    }
    let (out, displacement) = orthonormalize(raw)?;
    if !(displacement <= MAX_PROJECTION_DISPLACEMENT) {
        return Err(Error::ClosureViolation { residual: displacement });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quat;
    use std::f64::consts::PI;

    /// Orthonormal Fourier mode `e^{i pi k t} / sqrt 2`.
    fn mode(grid: GridSpec, k: f64) -> Vec<Complex64> {
        grid.params(ClosureClass::Loop)
            .iter()
            .map(|t| Complex64::from_polar(1.0 / 2f64.sqrt(), PI * k * t))
            .collect()
    }

    #[test]
    fn fourier_modes_are_orthonormal() {
        let g = GridSpec::new(32).unwrap();
        let p = StiefelPoint::new(Field::Complex, g, ClosureClass::Loop, mode(g, 0.0), mode(g, 1.0)).unwrap();
        assert!(p.residual() < 1e-15);
        let (same, d) = orthonormalize(&p).unwrap();
        assert!(d < 1e-15);
        assert!(same.residual() < 1e-15);
    }

    #[test]
    fn non_orthonormal_rejected() {
        let g = GridSpec::new(16).unwrap();
        let z = mode(g, 0.0);
        assert!(matches!(
            StiefelPoint::new(Field::Complex, g, ClosureClass::Loop, z.clone(), z.clone()),
            Err(Error::ClosureViolation { .. })
        ));
        assert_eq!(
            StiefelPoint::new(Field::Real, g, ClosureClass::Loop, mode(g, 1.0), z),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn projection_of_nearly_orthonormal_pair() {
        let g = GridSpec::new(64).unwrap();
        let z: Vec<Complex64> = mode(g, 0.0).iter().map(|c| c * 1.00002).collect();
        let w: Vec<Complex64> = mode(g, 1.0)
            .iter()
            .zip(mode(g, 0.0))
            .map(|(a, b)| a + b * 1e-5)
            .collect();
        let raw = StiefelPoint::unchecked(Field::Complex, g, ClosureClass::Loop, z, w).unwrap();
        let p = project_checked(&raw).unwrap();
        assert!(p.residual() < 1e-14);
        // same plane: projection of raw basis onto the output span is lossless
        let gram = cross_gram(&raw, &p);
        let captured: f64 = gram.iter().map(|c| c.norm_sqr()).sum();
        let total = raw.gram()[(0, 0)].re + raw.gram()[(1, 1)].re;
        assert!((captured - total).abs() < 1e-12);
    }

    #[test]
    fn open_paths_are_not_stiefel() {
        let g = GridSpec::new(16).unwrap();
        let q = QuaternionPath::from_fn(g, ClosureClass::Open, |_| Quat::ONE);
        assert_eq!(to_stiefel(&q), Err(Error::NotClosed));
    }

    #[test]
    fn open_interval_path_violates_closure() {
        let g = GridSpec::new(16).unwrap();
        let q = QuaternionPath::from_fn(g, ClosureClass::Loop, |_| Quat::ONE);
        assert!(matches!(to_stiefel(&q), Err(Error::ClosureViolation { .. })));
    }

    #[test]
    fn antiloop_shift_by_period_negates() {
        let g = GridSpec::new(16).unwrap();
        let z = mode(g, 0.5);
        let w = mode(g, -0.5);
        let p = StiefelPoint::new(Field::Complex, g, ClosureClass::AntiLoop, z, w).unwrap();
        let s = p.shifted(16);
        for (a, b) in s.z().iter().zip(p.z()) {
            assert!((a + b).norm() < 1e-15);
        }
        let back = p.shifted(5).shifted(-5);
        assert_eq!(back, p);
    }
}
