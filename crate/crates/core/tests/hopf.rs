mod common;

use std::f64::consts::PI;

use common::{random_path, rng, self_linking};
use framecurve::curve::hopf_closure_gap;
use framecurve::synth::TrigCurve;
use framecurve::*;
use rand::Rng;

fn round_trip_error(curve: &TrigCurve, n: usize) -> f64 {
    let g = GridSpec::new(n).unwrap();
    // curves are compared at the working scale of length 2
    let c = normalize_length(&curve.sample_frenet(g).unwrap()).unwrap();
    let back = hopf_map(&lift(&c, LiftSign::Plus).unwrap()).unwrap();
    assert_eq!(back.closure(), c.closure());
    let origin = c.gamma()[0];
    let mut err: f64 = 0.0;
    for i in 0..c.gamma().len() {
        err = err.max((back.gamma()[i] - (c.gamma()[i] - origin)).norm());
        err = err.max((back.frame()[i] - c.frame()[i]).norm());
    }
    err
}

fn generators() -> Vec<(&'static str, TrigCurve)> {
    vec![
        ("helix", TrigCurve::helix(1.0, 0.6, 1.5)),
        ("circle", TrigCurve::circle(1.0)),
        ("trefoil", TrigCurve::trefoil()),
        ("torus spiral", TrigCurve::torus_spiral(2.0, 0.6, 1, 5)),
    ]
}

#[test]
fn hopf_inverts_lift_with_high_order_convergence() {
    for (name, curve) in generators() {
        let coarse = round_trip_error(&curve, 256);
        let fine = round_trip_error(&curve, 512);
        println!("{name}: {coarse:.3e} -> {fine:.3e}");
        assert!(coarse < 1e-6, "{name}: {coarse}");
        assert!(fine <= coarse / 3.5 || fine < 1e-13, "{name}: {coarse} -> {fine}");
    }
}

#[test]
fn lifts_differ_only_by_sign() {
    let g = GridSpec::new(128).unwrap();
    let c = TrigCurve::trefoil().sample_frenet(g).unwrap();
    let plus = lift(&c, LiftSign::Plus).unwrap();
    let minus = lift(&c, LiftSign::Minus).unwrap();
    assert!(plus.negated().max_deviation(&minus) < 1e-15);
    let a = hopf_map(&plus).unwrap();
    let b = hopf_map(&minus).unwrap();
    assert!(a.max_deviation(&b) < 1e-14);
}

/// Framed loops with known linking against the Gauss integral oracle.
#[test]
fn parity_matches_gauss_linking_integral() {
    let g = GridSpec::new(1024).unwrap();
    let mut cases: Vec<(String, FramedCurve)> = Vec::new();
    let circle = TrigCurve::circle(1.0).sample_frenet(g).unwrap();
    for turns in 0..4 {
        let angle: Vec<f64> = g
            .params(ClosureClass::Loop)
            .iter()
            .map(|t| turns as f64 * PI * t)
            .collect();
        cases.push((format!("circle + {turns} turns"), circle.twisted(&angle)));
    }
    cases.push(("trefoil".into(), TrigCurve::trefoil().sample_frenet(g).unwrap()));
    cases.push((
        "torus spiral".into(),
        TrigCurve::torus_spiral(2.0, 0.6, 2, 3).sample_frenet(g).unwrap(),
    ));
    let anti = QuaternionPath::from_fn(g, ClosureClass::AntiLoop, |t| {
        let (c, s) = ((PI * t / 2.0).cos(), (PI * t / 2.0).sin());
        Quat::new(c, s, c, -s)
    });
    cases.push(("anticlosed example".into(), hopf_map(&anti).unwrap()));
    for (name, c) in cases {
        // pushoff well inside the tube radius, several segment lengths away
        let link = self_linking(&c, 0.05);
        let rounded = link.round();
        assert!((link - rounded).abs() < 0.05, "{name}: linking integral {link}");
        println!("{name}: linking {link:.4}");
        let expected = if rounded as i64 % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
        assert_eq!(linking_parity(&c).unwrap(), expected, "{name}: linking {link}");
    }
}

#[test]
fn anticlosed_example_maps_to_closed_loop() {
    let g = GridSpec::new(256).unwrap();
    let q = QuaternionPath::from_fn(g, ClosureClass::AntiLoop, |t| {
        let (c, s) = ((PI * t / 2.0).cos(), (PI * t / 2.0).sin());
        Quat::new(c, s, c, -s)
    });
    assert!(hopf_closure_gap(&q).unwrap() < 1e-12);
    let c = hopf_map(&q).unwrap();
    assert_eq!(c.closure(), Closure::Closed);
    assert_eq!(lift(&c, LiftSign::Plus).unwrap().class(), ClosureClass::AntiLoop);
}

/// Independent check of the closure conditions: closed class, equal L2
/// norms and orthogonality of the complex coordinates.
fn conditions_hold(q: &QuaternionPath, tol: f64) -> bool {
    if !q.class().is_closed() {
        return false;
    }
    let g = q.grid();
    let z = q.z();
    let w = q.w();
    let nz: f64 = g.integrate(&z.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(), q.class());
    let nw: f64 = g.integrate(&w.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>(), q.class());
    let re: Vec<f64> = z.iter().zip(&w).map(|(a, b)| (a * b.conj()).re).collect();
    let im: Vec<f64> = z.iter().zip(&w).map(|(a, b)| (a * b.conj()).im).collect();
    let cross = g.integrate(&re, q.class()).hypot(g.integrate(&im, q.class()));
    (nz - nw).abs() <= tol && cross <= tol
}

#[test]
fn closure_happens_exactly_under_the_conditions() {
    let g = GridSpec::new(256).unwrap();
    let mut r = rng(11);
    let mut closed_count = 0;
    for k in 0..100 {
        let class = match k % 4 {
            0 | 1 => ClosureClass::Open,
            2 => ClosureClass::Loop,
            _ => ClosureClass::AntiLoop,
        };
        let mut q = random_path(&mut r, g, class);
        // half of the closed samples are projected onto the conditions
        if class.is_closed() && r.random_bool(0.5) {
            q = common::gram_schmidt(&q);
        }
        let gap = hopf_closure_gap(&q).unwrap();
        let holds = conditions_hold(&q, 1e-6);
        assert_eq!(gap <= 1e-6, holds, "sample {k} ({class:?}): gap {gap}");
        assert_eq!(hopf_map(&q).unwrap().closure() == Closure::Closed, holds, "sample {k}");
        closed_count += holds as usize;
    }
    assert!(closed_count >= 10, "only {closed_count} closed samples");
}
