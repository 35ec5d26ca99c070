//! Quaternion arithmetic.
//!
//! A quaternion `q0 + q1 i + q2 j + q3 k` is identified with the complex pair
//! `(z, w) = (q0 + q1 i, q2 + q3 i)`, i.e. `q = z + w j`. Right multiplication
//! by a unit quaternion `a + b j` acts on the pair as the SU(2) matrix
//! `[[a, b], [-conj(b), conj(a)]]`, and left multiplication by a unit complex
//! scalar acts diagonally.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub fn pure(v: &Vector3<f64>) -> Self {
        Self::new(0.0, v.x, v.y, v.z)
    }

    pub fn from_complex_pair(z: Complex64, w: Complex64) -> Self {
        Self::new(z.re, z.im, w.re, w.im)
    }

    pub fn to_complex_pair(self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, self.z))
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product on R^4, equal to `Re(p conj(q))`.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn imag(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    /// `conj(q) v q` for a pure quaternion `v`; for unit `q` this is the
    /// rotation `h(q)` of the classical Hopf map applied to `v`.
    pub fn sandwich(self, v: &Vector3<f64>) -> Vector3<f64> {
        (self.conj() * Quat::pure(v) * self).imag()
    }

    /// `h(q) = (conj(q) i q, conj(q) j q, conj(q) k q)` as a matrix with those
    /// columns. Anti-homomorphic: `h(pq) = h(q) h(p)`.
    pub fn hopf_rotation(self) -> Matrix3<f64> {
        let u = self.normalize();
        Matrix3::from_columns(&[
            u.sandwich(&Vector3::x()),
            u.sandwich(&Vector3::y()),
            u.sandwich(&Vector3::z()),
        ])
    }

    /// Unit quaternion `u` with `h(u) = frame` for a rotation matrix `frame`.
    ///
    /// The sign is normalized so the largest-magnitude component is positive.
    pub fn from_hopf_rotation(frame: &Matrix3<f64>) -> Self {
        // h(u) x = conj(u) x u is the active rotation of p = conj(u); recover p
        // with Shepperd's method and conjugate.
        let m = frame;
        let trace = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
        let p = if trace > m[(0, 0)] && trace > m[(1, 1)] && trace > m[(2, 2)] {
            let s = (1.0 + trace).sqrt() * 2.0;
            Quat::new(
                0.25 * s,
                (m[(2, 1)] - m[(1, 2)]) / s,
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(1, 0)] - m[(0, 1)]) / s,
            )
        } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
            let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
            Quat::new(
                (m[(2, 1)] - m[(1, 2)]) / s,
                0.25 * s,
                (m[(0, 1)] + m[(1, 0)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
            )
        } else if m[(1, 1)] > m[(2, 2)] {
            let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
            Quat::new(
                (m[(0, 2)] - m[(2, 0)]) / s,
                (m[(0, 1)] + m[(1, 0)]) / s,
                0.25 * s,
                (m[(1, 2)] + m[(2, 1)]) / s,
            )
        } else {
            let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
            Quat::new(
                (m[(1, 0)] - m[(0, 1)]) / s,
                (m[(0, 2)] + m[(2, 0)]) / s,
                (m[(1, 2)] + m[(2, 1)]) / s,
                0.25 * s,
            )
        };
        let u = p.conj().normalize();
        let comps = [u.w, u.x, u.y, u.z];
        let largest = comps
            .iter()
            .copied()
            .fold(0.0_f64, |acc, c| if c.abs() > acc.abs() { c } else { acc });
        if largest < 0.0 {
            -u
        } else {
            u
        }
    }

    /// Quaternion `cos(angle/2) + sin(angle/2) axis` for a unit axis.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let a = axis.normalize() * (0.5 * angle).sin();
        Quat::new((0.5 * angle).cos(), a.x, a.y, a.z)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, r: Quat) -> Quat {
        Quat::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, s: f64) -> Quat {
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, r: Quat) -> Quat {
        Quat::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, r: Quat) {
        *self = *self + r;
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, r: Quat) -> Quat {
        Quat::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Zero for Quat {
    fn zero() -> Self {
        Quat::default()
    }
    fn is_zero(&self) -> bool {
        *self == Quat::default()
    }
}
