use birkhoff::{
    birkhoff_gauss, build_minimal_catenoid, build_nodoid, build_unduloid, curvatures_general,
    minimal_d1, nodoid_d3, tessellate, tessellate_periodic, unduloid_d2, Vec3,
};
use birkhoff_bench::{generic_jet, nodoid, space, unduloid};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn bench_constants(c: &mut Criterion) {
    let mut g = c.benchmark_group("constants");
    let s2 = space(2);
    let s3 = space(3);
    g.bench_function("minimal_d1_m2", |b| {
        b.iter(|| minimal_d1(&s2, black_box(1.0)).unwrap())
    });
    g.bench_function("unduloid_d2_m2", |b| {
        b.iter(|| unduloid_d2(&s2, black_box(0.1)).unwrap())
    });
    g.bench_function("nodoid_d3_m2", |b| {
        b.iter(|| nodoid_d3(&s2, black_box(2.0)).unwrap())
    });
    g.bench_function("nodoid_d3_m3", |b| {
        b.iter(|| nodoid_d3(&s3, black_box(2.0)).unwrap())
    });
    g.finish();
}

fn bench_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    let s = space(2);
    g.bench_function("minimal_catenoid", |b| {
        b.iter(|| build_minimal_catenoid(&s, black_box(1.0), 0.0).unwrap())
    });
    g.bench_function("unduloid_period", |b| {
        b.iter(|| build_unduloid(&s, black_box(0.1), 0.0).unwrap())
    });
    g.bench_function("nodoid_period", |b| {
        b.iter(|| build_nodoid(&s, black_box(2.0), 0.0).unwrap())
    });
    g.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate");
    let s = space(2);
    let jet = generic_jet();
    g.bench_function("curvature_pair", |b| {
        b.iter(|| curvatures_general(&s, black_box(jet)).unwrap())
    });
    g.bench_function("normal_map", |b| {
        b.iter(|| birkhoff_gauss(&s, black_box(jet.alpha_prime), black_box(jet.beta_prime), 0.7).unwrap())
    });
    let und = unduloid(2);
    let (lo, hi) = und.fundamental_domain();
    let t = lo + 0.37 * (hi - lo);
    g.bench_function("periodic_curvatures_at", |b| {
        b.iter(|| und.curvatures_at(black_box(t)).unwrap())
    });
    let nod = nodoid(2);
    g.bench_function("nodoid_frame", |b| {
        b.iter(|| nod.frame(black_box(0.2)).unwrap())
    });
    g.bench_function("gauge_norm", |b| {
        b.iter(|| s.norm(black_box(Vec3::new(0.3, -1.2, 0.8))))
    });
    g.finish();
}

fn bench_tessellate(c: &mut Criterion) {
    let mut g = c.benchmark_group("tessellate");
    g.sample_size(20);
    let s = space(2);
    let cat = build_minimal_catenoid(&s, 1.0, 0.0).unwrap();
    g.bench_function("catenoid_64x32", |b| {
        b.iter(|| tessellate(black_box(&cat), 64, 32).unwrap())
    });
    let und = unduloid(2);
    g.bench_function("unduloid_period_64x32", |b| {
        b.iter(|| tessellate_periodic(black_box(&und), 1, 64, 32).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_constants, bench_build, bench_evaluate, bench_tessellate);
criterion_main!(benches);
