//! Closed-form 2x2 complex linear algebra: Hermitian eigenproblems, SVD and
//! inverse square roots.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

pub type C2x2 = Matrix2<Complex64>;
pub type C2 = Vector2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigen-decomposition of a Hermitian 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: [f64; 2],
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: C2x2,
}

/// Orthogonal complement `(-conj(y), conj(x))` of a unit vector `(x, y)`.
fn complement(v: &C2) -> C2 {
    C2::new(-v[1].conj(), v[0].conj())
}

/// Solves the eigenproblem of `[[a, b], [conj(b), d]]` (only the upper
/// triangle and the real parts of the diagonal are read). When the
/// eigenvalues coincide the standard basis is returned, keeping input order.
pub fn hermitian_eigen(m: &C2x2) -> HermitianEigen {
    eigen_with_floor(m, 0.0)
}

/// [`hermitian_eigen`], treating eigenvalue gaps below
/// `eps (max(|entries|, floor))` as ties.
fn eigen_with_floor(m: &C2x2, floor: f64) -> HermitianEigen {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let radius = half.hypot(b.norm());
    let values = [mean + radius, mean - radius];
    let scale = a.abs().max(d.abs()).max(b.norm()).max(floor);
    if radius <= f64::EPSILON * scale || radius == 0.0 {
        return HermitianEigen {
            values,
            vectors: C2x2::identity(),
        };
    }
    // Leading eigenvector, from whichever row of (M - lambda I) is better
    // conditioned.
    let v = if half >= 0.0 {
        C2::new(Complex64::from(half + radius), b.conj())
    } else {
        C2::new(b, Complex64::from(radius - half))
    };
    let v = v / Complex64::from(v.norm());
    let w = complement(&v);
    HermitianEigen {
        values,
        vectors: C2x2::from_columns(&[v, w]),
    }
}

/// Singular value decomposition `g = u diag(s) w*` with `s[0] >= s[1] >= 0`
/// and `u`, `w` unitary. Real inputs give real factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub u: C2x2,
    pub s: [f64; 2],
    pub w: C2x2,
}

///
/// Singular values are compared on an absolute scale of at least one (the
/// inputs here are cross-Gram matrices of orthonormal bases), so a matrix
/// that is zero up to rounding keeps the standard bases.
pub fn svd2(g: &C2x2) -> Svd2 {
    let gram = g.adjoint() * g;
    let eig = eigen_with_floor(&gram, 1.0);
    let w = eig.vectors;
    let cols = [g * w.column(0), g * w.column(1)];
    let s = [cols[0].norm(), cols[1].norm()];
    // columns this short carry no direction information
    let tiny = 1e-14;
    let u0 = if s[0] > tiny {
        cols[0] / Complex64::from(s[0])
    } else {
        C2::new(ONE, ZERO)
    };
    let u1 = if s[1] > tiny {
        let mut c = cols[1] / Complex64::from(s[1]);
        // re-orthogonalize against u0 to absorb rounding
        let overlap = u0.dotc(&c);
        c -= u0 * overlap;
        c / Complex64::from(c.norm())
    } else {
        complement(&u0)
    };
    Svd2 {
        u: C2x2::from_columns(&[u0, u1]),
        s,
        w,
    }
}

/// `m^{-1/2}` for a Hermitian positive definite 2x2 matrix.
pub fn inv_sqrt(m: &C2x2) -> Option<C2x2> {
    let eig = hermitian_eigen(m);
    if !(eig.values[1] > 0.0) {
        return None;
    }
    let d = C2x2::from_diagonal(&C2::new(
        Complex64::from(1.0 / eig.values[0].sqrt()),
        Complex64::from(1.0 / eig.values[1].sqrt()),
    ));
    Some(eig.vectors * d * eig.vectors.adjoint())
}

/// `conj(m)` entrywise.
pub fn conj(m: &C2x2) -> C2x2 {
    m.map(|c| c.conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> C2x2 {
        C2x2::new(c(0.3, 0.4), c(-1.0, 0.2), c(0.5, -0.7), c(0.1, 0.9))
    }

    #[test]
    fn eigen_reconstructs() {
        let g = sample();
        let h = g.adjoint() * g;
        let e = hermitian_eigen(&h);
        let d = C2x2::from_diagonal(&C2::new(c(e.values[0], 0.0), c(e.values[1], 0.0)));
        assert!((e.vectors * d * e.vectors.adjoint() - h).norm() < 1e-14);
        assert!((e.vectors.adjoint() * e.vectors - C2x2::identity()).norm() < 1e-14);
        assert!(e.values[0] >= e.values[1]);
    }

    #[test]
    fn equal_eigenvalues_keep_order() {
        let e = hermitian_eigen(&(C2x2::identity() * c(2.0, 0.0)));
        assert_eq!(e.vectors, C2x2::identity());
    }

    #[test]
    fn svd_reconstructs_and_agrees_with_nalgebra() {
        let g = sample();
        let f = svd2(&g);
        let s = C2x2::from_diagonal(&C2::new(c(f.s[0], 0.0), c(f.s[1], 0.0)));
        assert!((f.u * s * f.w.adjoint() - g).norm() < 1e-14);
        let reference = g.singular_values();
        let mut r = [reference[0], reference[1]];
        r.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((r[0] - f.s[0]).abs() < 1e-14 && (r[1] - f.s[1]).abs() < 1e-14);
    }

    #[test]
    fn svd_rank_deficient() {
        let g = C2x2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let f = svd2(&g);
        assert_eq!(f.s, [1.0, 0.0]);
        assert!((f.u.adjoint() * f.u - C2x2::identity()).norm() < 1e-15);
        let z = svd2(&C2x2::zeros());
        assert_eq!(z.s, [0.0, 0.0]);
    }

    #[test]
    fn real_input_stays_real() {
        let g = C2x2::new(c(0.3, 0.0), c(-1.0, 0.0), c(0.5, 0.0), c(0.1, 0.0));
        let f = svd2(&g);
        assert!(f.u.iter().chain(f.w.iter()).all(|x| x.im == 0.0));
    }

    #[test]
    fn inverse_square_root() {
        let g = sample();
        let h = g.adjoint() * g + C2x2::identity();
        let r = inv_sqrt(&h).unwrap();
        assert!((r * h * r - C2x2::identity()).norm() < 1e-14);
        assert!(inv_sqrt(&C2x2::zeros()).is_none());
    }
}
