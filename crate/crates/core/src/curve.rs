//! Discretized framed curves, quaternionic paths, and the frame-Hopf map
//! between them.
//!
//! A quaternionic path `q` maps to the framed curve with velocity
//! `conj(q) i q` (integrated from the origin) and normal field
//! `conj(q) j q / |q|^2`. The map is two-to-one (`q` and `-q` agree), and the
//! length of the image equals the squared L2 norm of `q`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ClosureClass, GridSpec, Interp};
use crate::quat::Quat;

pub type Vec3 = Vector3<f64>;

/// Tolerance on `|V| = 1` for framed curves.
pub const UNIT_TOL: f64 = 1e-10;
/// Tolerance on `<T, V> = 0` for framed curves.
pub const NORMAL_TOL: f64 = 1e-8;
/// Samples with `|q|` below this are treated as zero.
pub const ZERO_QUAT_TOL: f64 = 1e-12;
/// Relative tolerance of the equinorm/orthogonality closure test in [`hopf_map`].
pub const CLOSURE_TOL: f64 = 1e-6;

/// Whether a curve is an open path or a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closure {
    Open,
    Closed,
}

impl Closure {
    /// Boundary class of the curve's own samples (positions, velocities, frames).
    pub fn class(self) -> ClosureClass {
        match self {
            Closure::Open => ClosureClass::Open,
            Closure::Closed => ClosureClass::Loop,
        }
    }
}

/// Mod-2 linking number of a framed loop with its pushoff along the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Which of the two lifts `±q` to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftSign {
    #[default]
    Plus,
    Minus,
}

/// An immersed curve with its velocity samples.
///
/// Velocities are stored rather than re-derived so that curves produced by
/// [`hopf_map`] or by analytic generators keep their exact tangents.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCurve {
    grid: GridSpec,
    closure: Closure,
    gamma: Vec<Vec3>,
    velocity: Vec<Vec3>,
}

impl BaseCurve {
    pub fn new(grid: GridSpec, closure: Closure, gamma: Vec<Vec3>, velocity: Vec<Vec3>) -> Result<Self> {
        grid.check_len(&gamma, closure.class())?;
        grid.check_len(&velocity, closure.class())?;
        if let Some(index) = velocity.iter().position(|v| !(v.norm() > 0.0)) {
            return Err(Error::DegenerateSpeed { index });
        }
        Ok(Self {
            grid,
            closure,
            gamma,
            velocity,
        })
    }

    /// Builds a curve from positions only, deriving velocities with the
    /// fourth-order difference rule of [`GridSpec::differentiate`].
    pub fn from_points(grid: GridSpec, closure: Closure, gamma: Vec<Vec3>) -> Result<Self> {
        grid.check_len(&gamma, closure.class())?;
        let velocity = grid.differentiate(&gamma, closure.class());
        Self::new(grid, closure, gamma, velocity)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn gamma(&self) -> &[Vec3] {
        &self.gamma
    }

    pub fn velocity(&self) -> &[Vec3] {
        &self.velocity
    }

    pub fn speed(&self, i: usize) -> f64 {
        self.velocity[i].norm()
    }

    pub fn tangent(&self, i: usize) -> Vec3 {
        self.velocity[i] / self.velocity[i].norm()
    }

    pub fn speeds(&self) -> Vec<f64> {
        self.velocity.iter().map(|v| v.norm()).collect()
    }

    pub fn length(&self) -> f64 {
        self.grid.integrate(&self.speeds(), self.closure.class())
    }

    /// Uniformly scaled copy (positions and velocities).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            closure: self.closure,
            gamma: self.gamma.iter().map(|p| p * factor).collect(),
            velocity: self.velocity.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn rotated(&self, rotation: &Matrix3<f64>) -> Self {
        Self {
            grid: self.grid,
            closure: self.closure,
            gamma: self.gamma.iter().map(|p| rotation * p).collect(),
            velocity: self.velocity.iter().map(|v| rotation * v).collect(),
        }
    }

    pub fn translated(&self, offset: &Vec3) -> Self {
        Self {
            gamma: self.gamma.iter().map(|p| p + offset).collect(),
            ..self.clone()
        }
    }
}

/// A curve together with a unit normal field `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedCurve {
    base: BaseCurve,
    frame: Vec<Vec3>,
}

impl FramedCurve {
    /// Validates `|V| = 1` and `<T, V> = 0` at every sample.
    pub fn new(base: BaseCurve, frame: Vec<Vec3>) -> Result<Self> {
        base.grid.check_len(&frame, base.closure.class())?;
        for (i, v) in frame.iter().enumerate() {
            let unit = (v.norm() - 1.0).abs();
            let normal = base.tangent(i).dot(v).abs();
            if !(unit <= UNIT_TOL && normal <= NORMAL_TOL) {
                return Err(Error::DegenerateFrame {
                    index: i,
                    residual: unit.max(normal),
                });
            }
        }
        Ok(Self { base, frame })
    }

    /// Projects each frame vector onto the normal plane of the tangent and
    /// normalizes it. Fails where the given vector is (nearly) tangent.
    pub fn with_projected_frame(base: BaseCurve, frame: Vec<Vec3>) -> Result<Self> {
        base.grid.check_len(&frame, base.closure.class())?;
        let mut projected = Vec::with_capacity(frame.len());
        for (i, v) in frame.iter().enumerate() {
            let t = base.tangent(i);
            let p = v - t * t.dot(v);
            let n = p.norm();
            if !(n > 1e-6 * v.norm().max(1e-300)) {
                return Err(Error::DegenerateFrame {
                    index: i,
                    residual: 1.0,
                });
            }
            projected.push(p / n);
        }
        Ok(Self { base, frame: projected })
    }

    pub fn base(&self) -> &BaseCurve {
        &self.base
    }

    pub fn into_base(self) -> BaseCurve {
        self.base
    }

    pub fn grid(&self) -> GridSpec {
        self.base.grid
    }

    pub fn closure(&self) -> Closure {
        self.base.closure
    }

    pub fn gamma(&self) -> &[Vec3] {
        &self.base.gamma
    }

    pub fn velocity(&self) -> &[Vec3] {
        &self.base.velocity
    }

    pub fn frame(&self) -> &[Vec3] {
        &self.frame
    }

    pub fn tangent(&self, i: usize) -> Vec3 {
        self.base.tangent(i)
    }

    /// `T x V` at sample `i`.
    pub fn binormal(&self, i: usize) -> Vec3 {
        self.base.tangent(i).cross(&self.frame[i])
    }

    pub fn length(&self) -> f64 {
        self.base.length()
    }

    pub fn rotated(&self, rotation: &Matrix3<f64>) -> Self {
        Self {
            base: self.base.rotated(rotation),
            frame: self.frame.iter().map(|v| rotation * v).collect(),
        }
    }

    pub fn translated(&self, offset: &Vec3) -> Self {
        Self {
            base: self.base.translated(offset),
            frame: self.frame.clone(),
        }
    }

    /// Rotates each frame vector by `angle[i]` about the tangent (right-hand rule).
    pub fn twisted(&self, angle: &[f64]) -> Self {
        let frame = self
            .frame
            .iter()
            .enumerate()
            .map(|(i, v)| v * angle[i].cos() + self.binormal(i) * angle[i].sin())
            .collect();
        Self {
            base: self.base.clone(),
            frame,
        }
    }

    /// Largest deviation between positions and frames of two curves on the same grid.
    pub fn max_deviation(&self, other: &FramedCurve) -> f64 {
        let g = self.gamma().iter().zip(other.gamma()).map(|(a, b)| (a - b).norm());
        let v = self.frame.iter().zip(other.frame()).map(|(a, b)| (a - b).norm());
        g.chain(v).fold(0.0, f64::max)
    }
}

/// A discretized quaternion-valued path on `[0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionPath {
    grid: GridSpec,
    class: ClosureClass,
    q: Vec<Quat>,
}

impl QuaternionPath {
    pub fn new(grid: GridSpec, class: ClosureClass, q: Vec<Quat>) -> Result<Self> {
        grid.check_len(&q, class)?;
        Ok(Self { grid, class, q })
    }

    /// Samples `f` at the stored parameters.
    pub fn from_fn(grid: GridSpec, class: ClosureClass, f: impl Fn(f64) -> Quat) -> Self {
        let q = grid.params(class).into_iter().map(f).collect();
        Self { grid, class, q }
    }

    pub fn from_complex(grid: GridSpec, class: ClosureClass, z: &[Complex64], w: &[Complex64]) -> Result<Self> {
        grid.check_len(z, class)?;
        grid.check_len(w, class)?;
        let q = z.iter().zip(w).map(|(a, b)| Quat::from_complex_pair(*a, *b)).collect();
        Ok(Self { grid, class, q })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn class(&self) -> ClosureClass {
        self.class
    }

    pub fn samples(&self) -> &[Quat] {
        &self.q
    }

    pub fn z(&self) -> Vec<Complex64> {
        self.q.iter().map(|q| q.to_complex_pair().0).collect()
    }

    pub fn w(&self) -> Vec<Complex64> {
        self.q.iter().map(|q| q.to_complex_pair().1).collect()
    }

    pub fn norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.q.iter().map(|q| q.norm_sq()).collect();
        self.grid.integrate(&sq, self.class)
    }

    pub fn map(&self, f: impl Fn(usize, Quat) -> Quat) -> Self {
        Self {
            grid: self.grid,
            class: self.class,
            q: self.q.iter().enumerate().map(|(i, q)| f(i, *q)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|_, q| q * factor)
    }

    pub fn negated(&self) -> Self {
        self.map(|_, q| -q)
    }

    /// All `n + 1` grid values, appending `±q(0)` for closed paths.
    pub fn unrolled(&self) -> Vec<Quat> {
        let mut out = self.q.clone();
        if self.class.is_closed() {
            out.push(self.q[0] * self.class.wrap_sign());
        }
        out
    }

    /// Cyclic shift `q(t) -> q(t + s dt)` of a closed path, flipping sign
    /// across the wraparound for anti-loops. Open paths are returned as is.
    pub fn shifted(&self, s: isize) -> Self {
        if !self.class.is_closed() {
            return self.clone();
        }
        let sign = self.class.wrap_sign();
        let n = self.q.len() as isize;
        Self {
            q: (0..n)
                .map(|i| crate::grid::periodic_value(&self.q, sign, i + s))
                .collect(),
            ..self.clone()
        }
    }

    /// Projects onto the radius `sqrt(2)` sphere.
    pub fn to_sphere(&self) -> Self {
        self.scaled((2.0 / self.norm_sq()).sqrt())
    }

    pub fn max_deviation(&self, other: &QuaternionPath) -> f64 {
        self.q
            .iter()
            .zip(&other.q)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }
}

/// Relative residual of the equinorm/orthogonality conditions on `(z, w)`.
pub(crate) fn closure_residual(q: &QuaternionPath) -> f64 {
    let grid = q.grid();
    let class = q.class();
    let z = q.z();
    let w = q.w();
    let zz: Vec<f64> = z.iter().map(|a| a.norm_sqr()).collect();
    let ww: Vec<f64> = w.iter().map(|a| a.norm_sqr()).collect();
    let zw: Vec<Complex64> = z.iter().zip(&w).map(|(a, b)| a * b.conj()).collect();
    let nz = grid.integrate(&zz, class);
    let nw = grid.integrate(&ww, class);
    let cross = grid.integrate(&zw, class).norm();
    let total = (nz + nw).max(f64::MIN_POSITIVE);
    ((nz - nw).abs() / total).max(2.0 * cross / total)
}

/// The frame-Hopf map `q -> (int conj(q) i q dt, conj(q) j q / |q|^2)`.
///
/// The base curve starts at the origin. The result is marked closed when `q`
/// is a loop or anti-loop whose complex coordinates are L2-equinorm and
/// orthogonal within [`CLOSURE_TOL`]; otherwise it is an open curve with
/// `n + 1` samples.
pub fn hopf_map(q: &QuaternionPath) -> Result<FramedCurve> {
    if let Some(index) = q.samples().iter().position(|s| s.norm() <= ZERO_QUAT_TOL) {
        return Err(Error::ZeroQuaternionSample { index });
    }
    let grid = q.grid();
    let closed = q.class().is_closed() && closure_residual(q) <= CLOSURE_TOL;
    let samples = if closed || !q.class().is_closed() {
        q.samples().to_vec()
    } else {
        q.unrolled()
    };
    let velocity: Vec<Vec3> = samples.iter().map(|s| s.sandwich(&Vector3::x())).collect();
    let frame: Vec<Vec3> = samples
        .iter()
        .map(|s| s.sandwich(&Vector3::y()) / s.norm_sq())
        .collect();
    let class = if closed { ClosureClass::Loop } else { ClosureClass::Open };
    let mut gamma = grid.cumulative(&velocity, class);
    let closure = if closed {
        gamma.pop();
        Closure::Closed
    } else {
        Closure::Open
    };
    Ok(FramedCurve {
        base: BaseCurve {
            grid,
            closure,
            gamma,
            velocity,
        },
        frame,
    })
}

/// Endpoint mismatch of the image of `q` under the frame-Hopf map: the
/// largest of the position gap `|gamma(2) - gamma(0)|`, the frame gap and the
/// velocity gap. For closed classes the displacement is the periodic
/// quadrature of the (always periodic) velocity over one period.
pub fn hopf_closure_gap(q: &QuaternionPath) -> Result<f64> {
    if let Some(index) = q.samples().iter().position(|s| s.norm() <= ZERO_QUAT_TOL) {
        return Err(Error::ZeroQuaternionSample { index });
    }
    let grid = q.grid();
    let n = grid.n_samples();
    let unrolled = q.unrolled();
    let velocity: Vec<Vec3> = unrolled.iter().map(|s| s.sandwich(&Vector3::x())).collect();
    let frame: Vec<Vec3> = unrolled
        .iter()
        .map(|s| s.sandwich(&Vector3::y()) / s.norm_sq())
        .collect();
    let displacement = if q.class().is_closed() {
        grid.integrate(&velocity[..n], ClosureClass::Loop)
    } else {
        grid.integrate(&velocity, ClosureClass::Open)
    };
    let v = (frame[n] - frame[0]).norm();
    let s = (velocity[n] - velocity[0]).norm();
    Ok(displacement.norm().max(v).max(s))
}

/// Unit quaternion `u` with `conj(u) i u = T`, `conj(u) j u = V`.
fn frame_quaternion(t: &Vec3, v: &Vec3, index: usize) -> Result<Quat> {
    let b = t.cross(v);
    let residual = (t.norm() - 1.0).abs().max((v.norm() - 1.0).abs()).max(t.dot(v).abs());
    if !(residual <= 1e-6) {
        return Err(Error::DegenerateFrame { index, residual });
    }
    Ok(Quat::from_hopf_rotation(&Matrix3::from_columns(&[*t, *v, b])))
}

/// Quaternionic lift of a framed curve: `q = sqrt(|gamma'|) u` where `u`
/// realizes the frame `(T, V, T x V)` under the classical Hopf map.
///
/// Signs are propagated greedily so consecutive samples have non-negative
/// inner product; this assumes the frame turns by less than 90 degrees per
/// grid step. For closed curves the class (loop or anti-loop) is read off
/// from whether the continuation returns to `q(0)` or `-q(0)`.
pub fn lift(c: &FramedCurve, sign: LiftSign) -> Result<QuaternionPath> {
    let len = c.frame().len();
    let mut q = Vec::with_capacity(len);
    let mut prev: Option<Quat> = None;
    for i in 0..len {
        let mut u = frame_quaternion(&c.tangent(i), &c.frame()[i], i)?;
        match prev {
            Some(p) if p.dot(u) < 0.0 => u = -u,
            None if sign == LiftSign::Minus => u = -u,
            _ => {}
        }
        prev = Some(u);
        q.push(u);
    }
    let class = match c.closure() {
        Closure::Open => ClosureClass::Open,
        Closure::Closed => {
            if q[len - 1].dot(q[0]) >= 0.0 {
                ClosureClass::Loop
            } else {
                ClosureClass::AntiLoop
            }
        }
    };
    let q = q
        .into_iter()
        .zip(c.velocity())
        .map(|(u, v)| u * v.norm().sqrt())
        .collect();
    QuaternionPath::new(c.grid(), class, q)
}

/// Mod-2 self-linking of a framed loop, read off from its lift.
///
/// Loops whose frame lifts to a closed quaternionic path have odd linking
/// number with their pushoff; anti-closed lifts have even linking number
/// (the round circle with its planar normal is the basic even example).
pub fn linking_parity(c: &FramedCurve) -> Result<Parity> {
    if c.closure() != Closure::Closed {
        return Err(Error::NotClosed);
    }
    Ok(match lift(c, LiftSign::Plus)?.class() {
        ClosureClass::Loop => Parity::Odd,
        _ => Parity::Even,
    })
}

/// Scales the base curve to length 2; the frame is unchanged.
pub fn normalize_length(c: &FramedCurve) -> Result<FramedCurve> {
    let base = normalize_base_length(c.base())?;
    Ok(FramedCurve {
        base,
        frame: c.frame.clone(),
    })
}

pub fn normalize_base_length(c: &BaseCurve) -> Result<BaseCurve> {
    let len = c.length();
    if !(len >= 1e-12) {
        return Err(Error::DegenerateCurve);
    }
    Ok(c.scaled(2.0 / len))
}

/// Linear resampling of a framed curve onto `grid`. Frames are re-projected
/// onto the normal planes of the interpolated tangents.
pub fn resample(c: &FramedCurve, grid: GridSpec) -> Result<FramedCurve> {
    let base = resample_base(c.base(), grid)?;
    let class = c.closure().class();
    let frame = grid
        .params(class)
        .into_iter()
        .map(|t| c.grid().sample_at(c.frame(), class, t, Interp::Linear))
        .collect();
    FramedCurve::with_projected_frame(base, frame)
}

pub fn resample_base(c: &BaseCurve, grid: GridSpec) -> Result<BaseCurve> {
    let class = c.closure().class();
    let params = grid.params(class);
    let src = c.grid();
    let gamma = params
        .iter()
        .map(|t| src.sample_at(c.gamma(), class, *t, Interp::Linear))
        .collect();
    let velocity = params
        .iter()
        .map(|t| src.sample_at(c.velocity(), class, *t, Interp::Linear))
        .collect();
    BaseCurve::new(grid, c.closure(), gamma, velocity)
}

/// Linear resampling of a quaternionic path; closed paths are interpolated
/// (anti-)periodically.
pub fn resample_path(q: &QuaternionPath, grid: GridSpec) -> Result<QuaternionPath> {
    let samples = grid
        .params(q.class())
        .into_iter()
        .map(|t| q.grid().sample_at(q.samples(), q.class(), t, Interp::Linear))
        .collect();
    QuaternionPath::new(grid, q.class(), samples)
}
