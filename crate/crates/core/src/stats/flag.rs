//! The flag mean of a set of 2-planes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stiefel::{inner, GrassmannPoint, StiefelPoint};

/// Convergence tolerance of the power iterations.
pub const POWER_TOL: f64 = 1e-10;
/// Iteration cap of each power iteration.
pub const POWER_MAX_ITERS: usize = 1000;
/// Leading singular values closer than this make the mean non-unique.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Outcome of [`flag_mean`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlagMean {
    pub point: StiefelPoint,
    /// The two leading singular values of the stacked bases.
    pub singular_values: [f64; 2],
    /// The leading singular values coincide, so the mean is not unique.
    pub degenerate: bool,
    /// Power iterations used for `z` and `w`.
    pub iterations: [usize; 2],
    /// Both power iterations met the tolerance within the iteration cap.
    pub converged: bool,
}

type Func = Vec<Complex64>;

fn norm(grid: crate::grid::GridSpec, x: &[Complex64]) -> f64 {
    inner(grid, x, x).re.max(0.0).sqrt()
}

fn scale(x: &[Complex64], c: Complex64) -> Func {
    x.iter().map(|v| v * c).collect()
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// The stacked bases of all samples, as the columns of a matrix `A`.
struct Stack<'a> {
    grid: crate::grid::GridSpec,
    columns: Vec<&'a [Complex64]>,
}

impl Stack<'_> {
    /// `A A* x = sum_k <x, a_k> a_k`, the sum of the projections onto the
    /// sample planes.
    fn apply(&self, x: &[Complex64]) -> Func {
        let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
        for a in &self.columns {
            axpy(&mut out, inner(self.grid, x, a), a);
        }
        out
    }

    /// Removes the component along the unit vector `d` (if any).
    fn deflate(&self, x: &mut [Complex64], d: Option<&[Complex64]>) {
        if let Some(d) = d {
            let c = inner(self.grid, x, d);
            axpy(x, -c, d);
        }
    }

    /// Power iteration for the dominant eigenvector of `A A*`, restricted to
    /// the orthogonal complement of `deflated`. Returns the unit vector, the
    /// eigenvalue, the iteration count and whether it converged.
    fn power(&self, start: &[Complex64], deflated: Option<&[Complex64]>) -> (Func, f64, usize, bool) {
        let mut x = start.to_vec();
        self.deflate(&mut x, deflated);
        let mut nx = norm(self.grid, &x);
        if !(nx > 1e-12) {
            // the start vector lies in the deflated direction; take any
            // column that does not
            for a in &self.columns {
                x = a.to_vec();
                self.deflate(&mut x, deflated);
                nx = norm(self.grid, &x);
                if nx > 1e-6 {
                    break;
                }
            }
        }
        x = scale(&x, Complex64::from(1.0 / nx));
        let mut lambda = 0.0;
        for it in 1..=POWER_MAX_ITERS {
            let mut y = self.apply(&x);
            self.deflate(&mut y, deflated);
            lambda = inner(self.grid, &y, &x).re;
            let ny = norm(self.grid, &y);
            if !(ny > 0.0) {
                return (x, 0.0, it, true);
            }
            let y = scale(&y, Complex64::from(1.0 / ny));
            let diff: Func = y.iter().zip(&x).map(|(a, b)| a - b).collect();
            let change = norm(self.grid, &diff);
            x = y;
            if change < POWER_TOL {
                return (x, lambda, it, true);
            }
        }
        (x, lambda, POWER_MAX_ITERS, false)
    }

    /// Multiplies `x` by a unit scalar so that its first non-negligible
    /// coefficient against the stacked columns is real and positive.
    fn fix_phase(&self, x: Func) -> Func {
        for a in &self.columns {
            let c = inner(self.grid, a, &x);
            if c.norm() > 1e-8 {
                return scale(&x, c.conj() / c.norm());
            }
        }
        x
    }
}

/// The flag mean: the plane spanned by the two leading left singular
/// vectors of the matrix whose columns are the orthonormal bases of all
/// samples.
///
/// The first vector minimizes `sum_j d([z], P_j)^2`, where `d` is the sine of
/// the angle between the line `[z]` and the plane `P_j`, and the second does
/// the same among vectors orthogonal to the first. Both come from power
/// iterations on `sum_j P_j` (the first sample's basis vectors as starting
/// points, the second one deflated against the first).
pub fn flag_mean(samples: &[GrassmannPoint]) -> Result<FlagMean> {
    let first = samples.first().ok_or(Error::EmptyInput)?.representative();
    for s in samples {
        let p = s.representative();
        p.grid().ensure_same(&first.grid())?;
        if p.field() != first.field() {
            return Err(Error::FieldMismatch);
        }
        if p.class() != first.class() {
            return Err(Error::ParityMismatch);
        }
    }
    let stack = Stack {
        grid: first.grid(),
        columns: samples
            .iter()
            .flat_map(|s| {
                let [z, w] = s.representative().basis();
                [z, w]
            })
            .collect(),
    };
    let (z, l1, it1, c1) = stack.power(first.z(), None);
    let z = stack.fix_phase(z);
    let (mut w, l2, it2, c2) = stack.power(first.w(), Some(&z));
    // re-orthogonalize against rounding drift
    stack.deflate(&mut w, Some(&z));
    let nw = norm(stack.grid, &w);
    let w = stack.fix_phase(scale(&w, Complex64::from(1.0 / nw)));
    let singular_values = [l1.max(0.0).sqrt(), l2.max(0.0).sqrt()];
    let point = first.with_coords(z, w);
    Ok(FlagMean {
        point,
        singular_values,
        degenerate: (singular_values[0] - singular_values[1]).abs() < DEGENERACY_TOL,
        iterations: [it1, it2],
        converged: c1 && c2,
    })
}

/// `sum_j (1 - |P_j z|^2)` for a unit vector `z`: the flag-mean objective of
/// the first vector.
pub fn line_objective(samples: &[GrassmannPoint], z: &[Complex64]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let p = s.representative();
            let g = p.grid();
            1.0 - inner(g, z, p.z()).norm_sqr() - inner(g, z, p.w()).norm_sqr()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ClosureClass, GridSpec};
    use crate::stiefel::Field;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn mode(g: GridSpec, k: f64) -> Vec<Complex64> {
        g.params(ClosureClass::Loop)
            .iter()
            .map(|t| Complex64::from_polar(FRAC_1_SQRT_2, PI * k * t))
            .collect()
    }

    fn plane(g: GridSpec, a: f64, b: f64) -> GrassmannPoint {
        StiefelPoint::new(Field::Complex, g, ClosureClass::Loop, mode(g, a), mode(g, b))
            .unwrap()
            .into()
    }

    #[test]
    fn copies_of_one_plane() {
        let g = GridSpec::new(32).unwrap();
        let p = plane(g, 0.0, 1.0);
        let m = flag_mean(&[p.clone(), p.clone(), p.clone()]).unwrap();
        assert!(m.point.residual() < 1e-12);
        let d = crate::registration::svd_align(p.representative(), &m.point)
            .unwrap()
            .distance();
        assert!(d < 1e-8);
    }

    #[test]
    fn orthogonal_planes_are_degenerate() {
        let g = GridSpec::new(32).unwrap();
        let m = flag_mean(&[plane(g, 0.0, 1.0), plane(g, 2.0, 3.0)]).unwrap();
        assert!(m.degenerate);
        assert!(m.point.residual() < 1e-12);
    }

    #[test]
    fn empty_input() {
        assert_eq!(flag_mean(&[]).unwrap_err(), Error::EmptyInput);
    }
}
