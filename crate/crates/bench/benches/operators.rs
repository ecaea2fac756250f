//! Microbenchmarks for the hot paths: support-function evaluation, the
//! log-support envelope on and off the coordinate hyperplanes, and one
//! application of each smoothing operator family.

use std::time::Duration;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use lelonglab_core::{
    fixtures, hs, inf_conv_a, int_conv_c, log_int_conv_d, sup_conv_b, CPoint, DistanceFn,
    Evaluable, Kernel, LogSupportFn, SearchConfig, Tropical,
};

fn eval_benches(c: &mut Criterion) {
    let quad = fixtures::example_quadrilateral(1.0, 3.0);
    let xi = [0.7, -0.3];
    c.bench_function("support/quadrilateral", |b| {
        b.iter(|| quad.support(black_box(&xi)))
    });

    let interior = CPoint::from_logmod(vec![0.4, -0.9]);
    c.bench_function("hs/interior", |b| {
        b.iter(|| hs(black_box(&quad), black_box(&interior)))
    });

    let on_face = CPoint::from_logmod(vec![f64::NEG_INFINITY, 0.5]);
    c.bench_function("hs/face-limit", |b| {
        b.iter(|| hs(black_box(&quad), black_box(&on_face)))
    });

    let tropical = Tropical::envelope(&fixtures::simplex(2));
    c.bench_function("tropical/envelope", |b| {
        b.iter(|| tropical.eval(black_box(&interior)))
    });
}

fn operator_benches(c: &mut Criterion) {
    let quad = fixtures::example_quadrilateral(1.0, 3.0);
    let u = LogSupportFn::new(quad.clone());
    let z = CPoint::from_logmod(vec![0.4, -0.9]);
    let mu = DistanceFn::euclidean(2);
    let search = SearchConfig::default();
    let delta = 0.25;

    let mut group = c.benchmark_group("searched");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(3));
    group.bench_function("inf-conv", |b| {
        b.iter(|| inf_conv_a(black_box(&u), &mu, delta, black_box(&z), &search).unwrap())
    });
    // the penalty slope 1/delta must clear the total mass sigma = 4
    let tight = 0.1;
    group.bench_function("sup-conv", |b| {
        b.iter(|| sup_conv_b(black_box(&u), tight, black_box(&z), None, &search).unwrap())
    });
    group.finish();

    let tropical = Tropical::envelope(&fixtures::simplex(2));
    let coarse = Kernel::new(12, 16);
    let standard = Kernel::standard();
    let mut group = c.benchmark_group("averaged");
    group
        .sample_size(10)
        .measurement_time(Duration::from_secs(5));
    group.bench_function("dilation-mean/coarse", |b| {
        b.iter(|| int_conv_c(black_box(&tropical), delta, black_box(&z), &coarse).unwrap())
    });
    group.bench_function("dilation-mean/standard", |b| {
        b.iter(|| int_conv_c(black_box(&tropical), delta, black_box(&z), standard).unwrap())
    });
    group.bench_function("exp-mean/coarse", |b| {
        b.iter(|| log_int_conv_d(black_box(&tropical), delta, black_box(&z), &coarse).unwrap())
    });
    group.finish();
}

criterion_group!(benches, eval_benches, operator_benches);
criterion_main!(benches);
