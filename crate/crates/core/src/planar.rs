//! Plane curves and the square-root transform `c -> sqrt(c')`.
//!
//! Writing `sqrt(c') = a + b i`, a closed plane curve of length 2 has
//! `(a, b)` L2-orthonormal, so planar shapes sit inside the real
//! Grassmannian. Read as complex coordinates `(z, w) = (a, b)`, the same pair
//! is the quaternionic lift of the curve placed in the xz-plane, which is why
//! planar points can share the closed-curve machinery.

use num_complex::Complex64;

use crate::curve::{BaseCurve, Closure, FramedCurve, Vec3};
use crate::error::{Error, Result};
use crate::grid::{ClosureClass, GridSpec};
use crate::stiefel::{project_checked, Field, StiefelPoint};

/// A sampled plane curve with its velocity, as complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    grid: GridSpec,
    closure: Closure,
    points: Vec<Complex64>,
    velocity: Vec<Complex64>,
}

impl PlanarCurve {
    pub fn new(grid: GridSpec, closure: Closure, points: Vec<Complex64>, velocity: Vec<Complex64>) -> Result<Self> {
        grid.check_len(&points, closure.class())?;
        grid.check_len(&velocity, closure.class())?;
        Ok(Self {
            grid,
            closure,
            points,
            velocity,
        })
    }

    /// Derives velocities by the grid's difference rule.
    pub fn from_points(grid: GridSpec, closure: Closure, points: Vec<Complex64>) -> Result<Self> {
        grid.check_len(&points, closure.class())?;
        let velocity = grid.differentiate(&points, closure.class());
        Self::new(grid, closure, points, velocity)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn velocity(&self) -> &[Complex64] {
        &self.velocity
    }

    pub fn length(&self) -> f64 {
        let speed: Vec<f64> = self.velocity.iter().map(|v| v.norm()).collect();
        self.grid.integrate(&speed, self.closure.class())
    }

    /// Scales to length 2.
    pub fn normalized(&self) -> Result<Self> {
        let len = self.length();
        if !(len >= 1e-12) {
            return Err(Error::DegenerateCurve);
        }
        let k = 2.0 / len;
        Ok(Self {
            points: self.points.iter().map(|p| p * k).collect(),
            velocity: self.velocity.iter().map(|v| v * k).collect(),
            ..self.clone()
        })
    }
}

impl PlanarCurve {
    /// Reads a space curve lying in the xy-plane as a plane curve.
    pub fn from_base(c: &BaseCurve) -> Result<Self> {
        let scale = c.gamma().iter().map(|p| p.norm()).fold(1.0, f64::max);
        if c.gamma()
            .iter()
            .chain(c.velocity())
            .any(|p| !(p.z.abs() <= 1e-9 * scale))
        {
            return Err(Error::InvalidArgument(
                "planar mode needs curves in the xy-plane".into(),
            ));
        }
        let to_c = |v: &[Vec3]| v.iter().map(|p| Complex64::new(p.x, p.y)).collect();
        Self::new(c.grid(), c.closure(), to_c(c.gamma()), to_c(c.velocity()))
    }

    /// The curve in the xy-plane of space, framed by the plane's normal.
    pub fn to_framed(&self) -> Result<FramedCurve> {
        let to_v = |v: &[Complex64]| v.iter().map(|c| Vec3::new(c.re, c.im, 0.0)).collect();
        let base = BaseCurve::new(self.grid, self.closure, to_v(&self.points), to_v(&self.velocity))?;
        let frame = vec![Vec3::z(); self.points.len()];
        FramedCurve::new(base, frame)
    }
}

/// The square root `s = sqrt(c')` of a plane curve, with its boundary class.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRoot {
    grid: GridSpec,
    class: ClosureClass,
    s: Vec<Complex64>,
}

impl PlanarRoot {
    pub fn new(grid: GridSpec, class: ClosureClass, s: Vec<Complex64>) -> Result<Self> {
        grid.check_len(&s, class)?;
        Ok(Self { grid, class, s })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn class(&self) -> ClosureClass {
        self.class
    }

    pub fn values(&self) -> &[Complex64] {
        &self.s
    }

    /// The real pair `(Re s, Im s)` as an orthonormal real 2-frame.
    ///
    /// Requires a closed curve of length 2; small quadrature residuals are
    /// projected away as in [`crate::stiefel::to_stiefel`].
    pub fn to_stiefel(&self) -> Result<StiefelPoint> {
        if !self.class.is_closed() {
            return Err(Error::NotClosed);
        }
        let a = self.s.iter().map(|c| Complex64::from(c.re)).collect();
        let b = self.s.iter().map(|c| Complex64::from(c.im)).collect();
        let raw = StiefelPoint::unchecked(Field::Real, self.grid, self.class, a, b)?;
        project_checked(&raw)
    }

    pub fn from_stiefel(p: &StiefelPoint) -> Result<Self> {
        if p.field() != Field::Real {
            return Err(Error::FieldMismatch);
        }
        let s = p
            .z()
            .iter()
            .zip(p.w())
            .map(|(a, b)| Complex64::new(a.re, b.re))
            .collect();
        Self::new(p.grid(), p.class(), s)
    }
}

/// `s = sqrt(c')` pointwise, with the branch chosen for continuity and the
/// principal branch at `t = 0`. Closed curves yield a loop or anti-loop
/// depending on the parity of the turning number.
pub fn planar_srt(c: &PlanarCurve) -> Result<PlanarRoot> {
    let mut s: Vec<Complex64> = Vec::with_capacity(c.velocity.len());
    for (i, v) in c.velocity.iter().enumerate() {
        if !(v.norm() > 0.0) {
            return Err(Error::ZeroDerivativeSample { index: i });
        }
        let mut r = v.sqrt();
        if let Some(prev) = s.last() {
            if (r * prev.conj()).re < 0.0 {
                r = -r;
            }
        }
        s.push(r);
    }
    let class = match c.closure {
        Closure::Open => ClosureClass::Open,
        Closure::Closed => {
            if (s[s.len() - 1] * s[0].conj()).re >= 0.0 {
                ClosureClass::Loop
            } else {
                ClosureClass::AntiLoop
            }
        }
    };
    PlanarRoot::new(c.grid, class, s)
}

/// Recovers the curve (based at the origin) by integrating `s^2`.
pub fn planar_srt_inverse(root: &PlanarRoot) -> Result<PlanarCurve> {
    let velocity: Vec<Complex64> = root.s.iter().map(|s| s * s).collect();
    let (class, closure) = if root.class.is_closed() {
        (ClosureClass::Loop, Closure::Closed)
    } else {
        (ClosureClass::Open, Closure::Open)
    };
    let mut points = root.grid.cumulative(&velocity, class);
    if closure == Closure::Closed {
        points.pop();
    }
    PlanarCurve::new(root.grid, closure, points, velocity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::TrigCurve;

    #[test]
    fn straight_segment_has_unit_root() {
        let g = GridSpec::new(16).unwrap();
        let c = TrigCurve::segment(2.0).sample_planar(g).unwrap();
        let r = planar_srt(&c).unwrap();
        for s in r.values() {
            assert!((s - Complex64::from(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn circle_root_is_an_antiloop() {
        let g = GridSpec::new(64).unwrap();
        let c = TrigCurve::circle(1.0).sample_planar(g).unwrap();
        assert_eq!(planar_srt(&c).unwrap().class(), ClosureClass::AntiLoop);
    }

    #[test]
    fn zero_derivative_rejected() {
        let g = GridSpec::new(8).unwrap();
        let mut v = vec![Complex64::from(1.0); 9];
        v[4] = Complex64::from(0.0);
        let c = PlanarCurve::new(g, Closure::Open, vec![Complex64::from(0.0); 9], v).unwrap();
        assert_eq!(planar_srt(&c), Err(Error::ZeroDerivativeSample { index: 4 }));
    }
}
