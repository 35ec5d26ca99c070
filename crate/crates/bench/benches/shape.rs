use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use framecurve::registration::dp_reparam;
use framecurve::synth::{smooth_warp, TrigCurve};
use framecurve::*;

fn frenet(curve: &TrigCurve, n: usize) -> FramedCurve {
    curve.sample_frenet(GridSpec::new(n).unwrap()).unwrap()
}

fn coordinate_maps(c: &mut Criterion) {
    let mut group = c.benchmark_group("hopf");
    for n in [256, 1024] {
        let curve = frenet(&TrigCurve::trefoil(), n);
        let q = lift(&curve, LiftSign::Plus).unwrap();
        group.bench_with_input(BenchmarkId::new("lift", n), &curve, |b, c| {
            b.iter(|| lift(black_box(c), LiftSign::Plus))
        });
        group.bench_with_input(BenchmarkId::new("hopf_map", n), &q, |b, q| {
            b.iter(|| hopf_map(black_box(q)))
        });
    }
    group.finish();
}

fn registration(c: &mut Criterion) {
    let g = GridSpec::new(128).unwrap();
    let c0 = normalize_length(&TrigCurve::helix(1.0, 0.6, 1.5).sample_frenet(g).unwrap()).unwrap();
    let q0 = lift(&c0, LiftSign::Plus).unwrap().to_sphere();
    let rho = Warp::from_fn(g, smooth_warp(0.3, 1)).unwrap();
    let q1 = registration::apply_warp(&q0, &rho).unwrap();
    let cfg = DPConfig::default();
    c.bench_function("dp_reparam/128", |b| {
        b.iter(|| dp_reparam(black_box(&q0), black_box(&q1), &cfg))
    });

    let a = ShapeInput::Framed(frenet(&TrigCurve::trefoil(), 128));
    let m = TrigCurve::trefoil().rotated(&synth::random_rotation(&mut rand_seed()));
    let bb = ShapeInput::Framed(
        m.sample_frenet_twisted(g, |t| 0.4 * (std::f64::consts::PI * t).sin())
            .unwrap(),
    );
    let mut group = c.benchmark_group("shape_distance");
    group.sample_size(10);
    for mode in [Mode::ClosedFramed, Mode::ClosedUnframed] {
        group.bench_function(mode.name(), |b| {
            b.iter(|| shape_distance(black_box(&a), black_box(&bb), mode, &cfg))
        });
    }
    group.finish();
}

fn rand_seed() -> impl rand::Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(1)
}

fn geodesics(c: &mut Criterion) {
    let a = frenet(&TrigCurve::torus_spiral(2.0, 0.7, 2, 3), 128);
    let b = frenet(&TrigCurve::torus_spiral(2.0, 0.7, 3, 2), 128);
    let cfg = DPConfig::default();
    let mut group = c.benchmark_group("geodesic");
    group.sample_size(10);
    group.bench_function("closed_framed/128", |bn| {
        bn.iter(|| geodesic_closed_framed(black_box(&a), black_box(&b), 10, &cfg))
    });
    group.finish();
}

criterion_group!(benches, coordinate_maps, registration, geodesics);
criterion_main!(benches);
