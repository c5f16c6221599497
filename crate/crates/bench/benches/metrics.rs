use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use opendom_bench::{closed_sets, gammas, maps};
use opendom_core::rational::pow2_neg;
use opendom_core::{beta, counterexample_gamma, d_fell, d_gamma, AmbientSpace, PartialMap};

fn beta_by_tolerance(c: &mut Criterion) {
    let mut group = c.benchmark_group("beta");
    for space in [AmbientSpace::Reals, AmbientSpace::UnitInterval] {
        let fs = maps(space, 2);
        for k in [8u32, 10, 12] {
            let tol = pow2_neg(k);
            group.bench_with_input(BenchmarkId::new(space.to_string(), format!("2^-{k}")), &tol, |b, tol| {
                b.iter(|| beta(&fs[0], &fs[1], tol).unwrap())
            });
        }
    }
    group.finish();
}

fn counterexample(c: &mut Criterion) {
    let empty = PartialMap::empty(AmbientSpace::UnitInterval, AmbientSpace::UnitInterval);
    let f = counterexample_gamma(8).into_base();
    let tol = pow2_neg(12);
    c.bench_function("beta/counterexample_n8", |b| b.iter(|| beta(&f, &empty, &tol).unwrap()));
}

fn gamma_and_fell(c: &mut Criterion) {
    let tol = pow2_neg(10);
    let gs = gammas(AmbientSpace::Reals, 2);
    c.bench_function("d_gamma/reals_2^-10", |b| b.iter(|| d_gamma(&gs[0], &gs[1], &tol).unwrap()));
    let sets = closed_sets(AmbientSpace::UnitInterval, 2);
    c.bench_function("d_fell/unit_interval_2^-10", |b| b.iter(|| d_fell(&sets[0], &sets[1], &tol).unwrap()));
}

criterion_group!(benches, beta_by_tolerance, counterexample, gamma_and_fell);
criterion_main!(benches);
