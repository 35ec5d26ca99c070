#![allow(clippy::needless_range_loop)]

mod common;

use std::f64::consts::PI;

use common::{random_stiefel, rng};
use framecurve::stats::{flag_mean, line_objective};
use framecurve::synth::{random_rotation, TrigCurve};
use framecurve::*;
use num_complex::Complex64;
use rand::Rng;

fn plane_dist(a: &StiefelPoint, b: &StiefelPoint) -> f64 {
    grassmann_distance(&GrassmannPoint::new(a.clone()), &GrassmannPoint::new(b.clone()))
        .unwrap()
        .distance
}

/// Torus spiral with jittered radii, rotated and carrying a random twist
/// of its Frenet frame.
pub fn spiral_sample(r: &mut impl Rng, g: GridSpec, p: u32, q: u32) -> ShapeInput {
    let c = TrigCurve::torus_spiral(r.random_range(1.9..2.1), r.random_range(0.65..0.75), p, q)
        .rotated(&random_rotation(r));
    let a = r.random_range(-0.3..0.3);
    ShapeInput::Framed(c.sample_frenet_twisted(g, move |t| a * (PI * t).sin()).unwrap())
}

#[test]
fn flag_mean_of_one_plane_is_that_plane() {
    let g = GridSpec::new(128).unwrap();
    let mut r = rng(41);
    for class in [ClosureClass::Loop, ClosureClass::AntiLoop] {
        let s = random_stiefel(&mut r, g, class);
        for copies in [1, 3] {
            let m = flag_mean(&vec![GrassmannPoint::new(s.clone()); copies]).unwrap();
            assert!(m.converged);
            assert!(m.point.residual() < 1e-8);
            assert!(plane_dist(&m.point, &s) < 1e-8, "{}", plane_dist(&m.point, &s));
        }
    }
}

#[test]
fn flag_mean_first_vector_beats_random_competitors() {
    let g = GridSpec::new(64).unwrap();
    let mut r = rng(42);
    for set in 0..10 {
        let samples: Vec<GrassmannPoint> = (0..5)
            .map(|_| random_stiefel(&mut r, g, ClosureClass::Loop).into())
            .collect();
        let m = flag_mean(&samples).unwrap();
        let best = line_objective(&samples, m.point.z());
        let n = m.point.z().len();
        for _ in 0..1000 {
            // random combination of the sample bases plus a little noise
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for s in &samples {
                let p = s.representative();
                let (a, b) = (
                    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
                    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
                );
                for i in 0..n {
                    z[i] += a * p.z()[i] + b * p.w()[i];
                }
            }
            for v in z.iter_mut() {
                *v += Complex64::new(r.random_range(-0.1..0.1), r.random_range(-0.1..0.1));
            }
            let norm = stiefel::inner(g, &z, &z).re.sqrt();
            let z: Vec<Complex64> = z.iter().map(|v| v / norm).collect();
            let val = line_objective(&samples, &z);
            assert!(best <= val + 1e-9, "set {set}: {best} > {val}");
        }
    }
}

#[test]
fn averaging_objective_never_increases() {
    let g = GridSpec::new(96).unwrap();
    let mut r = rng(43);
    let curves: Vec<ShapeInput> = (0..4).map(|_| spiral_sample(&mut r, g, 2, 3)).collect();
    let cfg = DPConfig {
        max_iters: 6,
        ..DPConfig::default()
    };
    let m = stats::mean_closed_curves(&curves, Mode::ClosedFramed, &cfg).unwrap();
    assert!(!m.objective.is_empty());
    assert!(m.objective.windows(2).all(|w| w[1] <= w[0]), "{:?}", m.objective);
    assert!(m.coords.residual() < 1e-8);
    assert_eq!(m.curve.closure(), Closure::Closed);
}

#[test]
fn k_medoids_separates_two_families() {
    let g = GridSpec::new(96).unwrap();
    let mut r = rng(44);
    let mut curves = Vec::new();
    for _ in 0..4 {
        curves.push(spiral_sample(&mut r, g, 2, 3));
    }
    for _ in 0..4 {
        curves.push(spiral_sample(&mut r, g, 3, 2));
    }
    let labels = (0..8).map(|i| format!("c{i}")).collect();
    let dm = stats::distance_matrix(&curves, labels, Mode::ClosedUnframed, &DPConfig::default()).unwrap();
    assert!(dm.failures.is_empty(), "{:?}", dm.failures);
    let res = stats::k_medoids(&dm.d, 2, 7).unwrap();
    // purity: each cluster is drawn from a single family
    let truth = |i: usize| i / 4;
    let mut pure = 0;
    for &m in &res.medoids {
        let members: Vec<usize> = (0..8).filter(|&i| res.assignment[i] == m).collect();
        let ones = members.iter().filter(|&&i| truth(i) == 1).count();
        pure += ones.max(members.len() - ones);
    }
    assert_eq!(pure as f64 / 8.0, 1.0, "{:?}", res.assignment);
    assert!(res.cost_history.windows(2).all(|w| w[1] <= w[0]));
}
