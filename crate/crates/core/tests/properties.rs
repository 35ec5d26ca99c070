mod common;

use common::{random_path, random_stiefel, rng, uniform_unit_quat};
use framecurve::linalg::C2x2;
use framecurve::registration::{apply_rotation, apply_warp, optimal_rotation, optimal_twist};
use framecurve::stats::k_medoids;
use framecurve::synth::smooth_warp;
use framecurve::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> GridSpec {
    GridSpec::new(64).unwrap()
}

fn class_of(k: u8) -> ClosureClass {
    [ClosureClass::Open, ClosureClass::Loop, ClosureClass::AntiLoop][k as usize % 3]
}

fn sphere_point(seed: u64, class: ClosureClass) -> QuaternionPath {
    random_path(&mut rng(seed), grid(), class).to_sphere()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sphere_distance_is_a_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), k in 0u8..3) {
        let class = class_of(k);
        let (p, q, r) = (sphere_point(a, class), sphere_point(b, class), sphere_point(c, class));
        let pq = sphere_distance(&p, &q, false).unwrap();
        let qp = sphere_distance(&q, &p, false).unwrap();
        let pr = sphere_distance(&p, &r, false).unwrap();
        let rq = sphere_distance(&r, &q, false).unwrap();
        prop_assert!((pq - qp).abs() < 1e-12);
        prop_assert!((0.0..=std::f64::consts::PI + 1e-12).contains(&pq));
        prop_assert!(pq <= pr + rq + 1e-10);
        prop_assert!(sphere_distance(&p, &p, false).unwrap() < 1e-6);
    }

    #[test]
    fn rotation_preserves_norm_and_the_optimum_never_loses(a in any::<u64>(), b in any::<u64>(), k in 0u8..3) {
        let class = class_of(k);
        let (p, q) = (sphere_point(a, class), sphere_point(b, class));
        let rot = uniform_unit_quat(&mut rng(a ^ b));
        let moved = apply_rotation(&q, rot);
        prop_assert!((moved.norm_sq() - q.norm_sq()).abs() < 1e-10);
        let best = apply_rotation(&q, optimal_rotation(&p, &q).unwrap());
        let d = |x: &QuaternionPath| sphere_distance(&p, x, false).unwrap();
        prop_assert!(d(&best) <= d(&q) + 1e-12);
        prop_assert!(d(&best) <= d(&moved) + 1e-12);
    }

    #[test]
    fn optimal_twist_never_loses(a in any::<u64>(), b in any::<u64>(), k in 0u8..3) {
        let class = class_of(k);
        let (p, q) = (sphere_point(a, class), sphere_point(b, class));
        let t = optimal_twist(&p, &q).unwrap();
        prop_assert_eq!(t.class(), class);
        let d = |x: &QuaternionPath| sphere_distance(&p, x, false).unwrap();
        prop_assert!(d(&t) <= d(&q) + 1e-12);
        prop_assert!((t.norm_sq() - q.norm_sq()).abs() < 1e-10);
    }

    #[test]
    fn warp_then_inverse_is_close_to_identity(strength in 0.0f64..0.3, mode in 1u32..4) {
        let g = grid();
        let rho = Warp::from_fn(g, smooth_warp(strength, mode)).unwrap();
        let id = rho.compose(&rho.inverse().unwrap()).unwrap();
        prop_assert!(id.max_deviation_from_identity() < 1e-9);
        let q = random_path(&mut rng(mode as u64), g, ClosureClass::Open);
        let back = apply_warp(&apply_warp(&q, &rho).unwrap(), &rho.inverse().unwrap()).unwrap();
        prop_assert!(back.max_deviation(&q) < 0.05 * q.max_deviation(&q.scaled(0.0)));
    }

    #[test]
    fn grassmann_distance_ignores_the_basis(a in any::<u64>(), b in any::<u64>(), k in 1u8..3) {
        let class = class_of(k);
        let g = grid();
        let s0 = random_stiefel(&mut rng(a), g, class);
        let s1 = random_stiefel(&mut rng(b), g, class);
        let (x, y) = uniform_unit_quat(&mut rng(a.wrapping_add(b))).to_complex_pair();
        let m = C2x2::new(x, y, -y.conj(), x.conj()) * Complex64::from_polar(1.0, (a % 7) as f64);
        let d = |u: &StiefelPoint, v: &StiefelPoint| grassmann_distance(&u.clone().into(), &v.clone().into()).unwrap().distance;
        let before = d(&s0, &s1);
        let after = d(&s0, &s1.rebased(&m).unwrap());
        prop_assert!((before - after).abs() < 1e-8);
        prop_assert!(before <= Space::Grassmann.diameter() + 1e-12);
        prop_assert!((0.0..=1.0).contains(&normalized_distance(before, Space::Grassmann)));
    }

    #[test]
    fn k_medoids_cost_only_decreases(points in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..14), k in 1usize..5, seed in any::<u64>()) {
        let n = points.len();
        let k = k.min(n);
        let d: Vec<Vec<f64>> = points.iter().map(|p| points.iter().map(|q| (p.0 - q.0).hypot(p.1 - q.1)).collect()).collect();
        let r = k_medoids(&d, k, seed).unwrap();
        prop_assert_eq!(r.medoids.len(), k);
        prop_assert!(r.cost_history.windows(2).all(|w| w[1] <= w[0]));
        for (i, m) in r.assignment.iter().enumerate() {
            prop_assert!(r.medoids.iter().all(|o| d[i][*m] <= d[i][*o]));
        }
        prop_assert_eq!(&k_medoids(&d, k, seed).unwrap(), &r);
    }

    #[test]
    fn mode_names_round_trip(i in 0usize..5) {
        let m = Mode::ALL[i];
        prop_assert_eq!(m.name().parse::<Mode>().unwrap(), m);
    }
}
