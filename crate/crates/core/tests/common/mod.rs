//! Helpers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use framecurve::{ClosureClass, FramedCurve, GridSpec, Quat, QuaternionPath};
use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random smooth quaternion path of the given class: a constant plus a few
/// Fourier modes. Loops use whole frequencies `k pi`, anti-loops odd
/// multiples of `pi / 2` (so `q(t + 2) = -q(t)`), open paths arbitrary ones.
pub fn random_path(rng: &mut impl Rng, grid: GridSpec, class: ClosureClass) -> QuaternionPath {
    let mut terms = Vec::new();
    for k in 0..4 {
        let freq = match class {
            ClosureClass::Loop => k as f64 * PI,
            ClosureClass::AntiLoop => (k as f64 + 0.5) * PI,
            ClosureClass::Open => rng.random_range(0.0..3.0) * PI,
        };
        let a = Quat::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let b = Quat::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let scale = 1.0 / (1.0 + k as f64);
        terms.push((freq, a * scale, b * scale));
    }
    let lift = Quat::new(2.5, 0.0, 0.0, 0.0);
    QuaternionPath::from_fn(grid, class, move |t| {
        let mut q = if class == ClosureClass::AntiLoop {
            Quat::new(0.0, 0.0, 0.0, 0.0)
        } else {
            lift
        };
        for (f, a, b) in &terms {
            q = q + *a * (f * t).cos() + *b * (f * t).sin();
        }
        q
    })
}

/// Gauss linking integral of two closed polygons.
pub fn gauss_linking(a: &[Vector3<f64>], b: &[Vector3<f64>]) -> f64 {
    let seg = |p: &[Vector3<f64>], i: usize| {
        let j = (i + 1) % p.len();
        (0.5 * (p[i] + p[j]), p[j] - p[i])
    };
    let mut total = 0.0;
    for i in 0..a.len() {
        let (ma, da) = seg(a, i);
        for j in 0..b.len() {
            let (mb, db) = seg(b, j);
            let r = ma - mb;
            total += da.cross(&db).dot(&r) / r.norm().powi(3);
        }
    }
    total / (4.0 * PI)
}

/// Linking number of a framed loop with its pushoff along the frame.
pub fn self_linking(c: &FramedCurve, eps: f64) -> f64 {
    let pushed: Vec<Vector3<f64>> = c.gamma().iter().zip(c.frame()).map(|(g, v)| g + v * eps).collect();
    gauss_linking(c.gamma(), &pushed)
}

/// Uniformly distributed unit quaternion, from Shoemake's subgroup
/// algorithm (independent of the library's sampler).
pub fn uniform_unit_quat(rng: &mut impl Rng) -> Quat {
    let u1: f64 = rng.random();
    let (u2, u3): (f64, f64) = (rng.random::<f64>() * 2.0 * PI, rng.random::<f64>() * 2.0 * PI);
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    Quat::new(a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos())
}

/// Smooth random unit-modulus field `exp(i phi(t))`; periodic when `closed`.
pub fn random_phase_field(rng: &mut impl Rng, grid: GridSpec, class: ClosureClass) -> Vec<num_complex::Complex64> {
    let coeffs: Vec<(f64, f64, f64)> = (0..4)
        .map(|k| {
            let f = if class.is_closed() {
                k as f64 * PI
            } else {
                rng.random_range(0.0..3.0)
            };
            (f, rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
        })
        .collect();
    grid.params(class)
        .into_iter()
        .map(|t| {
            let phi: f64 = coeffs
                .iter()
                .map(|(f, a, b)| a * (f * t).cos() + b * (f * t).sin())
                .sum();
            num_complex::Complex64::from_polar(1.0, phi)
        })
        .collect()
}

/// Makes the complex coordinates orthogonal with equal norms.
pub fn gram_schmidt(q: &QuaternionPath) -> QuaternionPath {
    let g = q.grid();
    let ip = |a: &[num_complex::Complex64], b: &[num_complex::Complex64]| -> num_complex::Complex64 {
        let v: Vec<num_complex::Complex64> = a.iter().zip(b).map(|(x, y)| x * y.conj()).collect();
        g.integrate(&v, q.class())
    };
    let z = q.z();
    let nz = ip(&z, &z).re.sqrt();
    let z: Vec<num_complex::Complex64> = z.iter().map(|v| v / nz).collect();
    let w = q.w();
    let c = ip(&w, &z);
    let w: Vec<num_complex::Complex64> = w.iter().zip(&z).map(|(a, b)| a - b * c).collect();
    let nw = ip(&w, &w).re.sqrt();
    let w: Vec<num_complex::Complex64> = w.iter().map(|v| v / nw).collect();
    QuaternionPath::from_complex(g, q.class(), &z, &w).unwrap()
}

/// Stiefel point of a random closed path of the given class.
pub fn random_stiefel(rng: &mut impl Rng, grid: GridSpec, class: ClosureClass) -> framecurve::StiefelPoint {
    let q = gram_schmidt(&random_path(rng, grid, class));
    framecurve::StiefelPoint::new(framecurve::Field::Complex, grid, class, q.z(), q.w()).unwrap()
}
