mod common;

use common::{random_path, rng};
use framecurve::metric::TangentField;
use framecurve::synth::{random_rotation, TrigCurve};
use framecurve::*;
use num_complex::Complex64;
use rand::Rng;

/// Central difference of the frame-Hopf map along `p`, as a tangent field
/// `(nu, nu', W)` at `hopf_map(q)`.
fn hopf_differential(q: &QuaternionPath, p: &QuaternionPath, eps: f64) -> TangentField {
    let plus = hopf_map(&q.map(|i, s| s + p.samples()[i] * eps)).unwrap();
    let minus = hopf_map(&q.map(|i, s| s - p.samples()[i] * eps)).unwrap();
    let diff = |a: &[Vec3], b: &[Vec3]| -> Vec<Vec3> { a.iter().zip(b).map(|(x, y)| (x - y) / (2.0 * eps)).collect() };
    TangentField::new(
        diff(plus.gamma(), minus.gamma()),
        diff(plus.velocity(), minus.velocity()),
        diff(plus.frame(), minus.frame()),
    )
}

#[test]
fn hopf_map_pulls_back_g_s_to_l2() {
    let g = GridSpec::new(512).unwrap();
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let q = random_path(&mut r, g, ClosureClass::Open);
        let p = random_path(&mut r, g, ClosureClass::Open).scaled(r.random_range(0.1..2.0));
        let c = hopf_map(&q).unwrap();
        let dh = hopf_differential(&q, &p, 1e-5);
        let lhs = metric::g_s(&c, &dh, &dh).unwrap();
        let rhs = p.norm_sq();
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    println!("worst relative error {worst:.3e}");
    assert!(worst < 1e-3, "{worst}");
}

fn closed_point(curve: &TrigCurve, n: usize) -> StiefelPoint {
    let c = normalize_length(&curve.sample_frenet(GridSpec::new(n).unwrap()).unwrap()).unwrap();
    to_stiefel(&lift(&c, LiftSign::Plus).unwrap()).unwrap()
}

fn dist(a: &StiefelPoint, b: &StiefelPoint) -> f64 {
    grassmann_distance(&GrassmannPoint::new(a.clone()), &GrassmannPoint::new(b.clone()))
        .unwrap()
        .distance
}

fn random_unitary(r: &mut impl Rng) -> framecurve::linalg::C2x2 {
    let a = common::uniform_unit_quat(r);
    let (x, y) = a.to_complex_pair();
    let phase = Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU));
    framecurve::linalg::C2x2::new(x, y, -y.conj(), x.conj()) * phase
}

#[test]
fn grassmann_distance_is_a_metric_on_planes() {
    let mut r = rng(8);
    let n = 128;
    let loops: Vec<StiefelPoint> = (0..6)
        .filter_map(|_| {
            let curve = TrigCurve::random_loop(&mut r, 3, 0.5);
            curve.sample_frenet(GridSpec::new(n).unwrap()).ok()?;
            let p = closed_point(&curve, n);
            (p.class() == ClosureClass::Loop).then_some(p)
        })
        .collect();
    assert!(loops.len() >= 3, "too few loops of one class");
    for a in &loops {
        assert!(dist(a, a) < 1e-7);
        let m = random_unitary(&mut r);
        assert!(dist(a, &a.rebased(&m).unwrap()) < 1e-7);
        for b in &loops {
            let d = dist(a, b);
            assert!((d - dist(b, a)).abs() < 1e-12);
            assert!(d <= std::f64::consts::PI / 2.0 * 2f64.sqrt() + 1e-12);
            for c in &loops {
                assert!(dist(a, c) <= d + dist(b, c) + 1e-10);
            }
        }
    }
}

#[test]
fn rotated_and_translated_curves_have_the_same_plane() {
    let mut r = rng(21);
    let g = GridSpec::new(128).unwrap();
    let c = normalize_length(&TrigCurve::trefoil().sample_frenet(g).unwrap()).unwrap();
    let moved = c
        .rotated(&random_rotation(&mut r))
        .translated(&Vec3::new(3.0, -1.0, 2.0));
    let a = to_stiefel(&lift(&c, LiftSign::Plus).unwrap()).unwrap();
    let b = to_stiefel(&lift(&moved, LiftSign::Plus).unwrap()).unwrap();
    assert!(dist(&a, &b) < 1e-7);
}

#[test]
fn normalized_distances_lie_in_unit_interval() {
    assert_eq!(normalized_distance(0.0, Space::Grassmann), 0.0);
    assert!((normalized_distance(Space::Grassmann.diameter(), Space::Grassmann) - 1.0).abs() < 1e-15);
    assert!((normalized_distance(Space::Sphere.diameter(), Space::Sphere) - 1.0).abs() < 1e-15);
}
