use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sqg_bench::random_field;
use sqg_core::flux::FluxCalculator;
use sqg_core::spectral::{riesz_perp, to_physical, to_spectral};
use sqg_core::BlockSet;

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for n in [128, 256] {
        let theta = random_field(n, 1);
        let grid = *theta.grid();
        group.bench_with_input(BenchmarkId::new("forward", n), &theta, |b, th| {
            b.iter(|| to_spectral(&grid, th.values()))
        });
        group.bench_with_input(BenchmarkId::new("inverse", n), &theta, |b, th| {
            b.iter(|| to_physical(&grid, th.coeffs()))
        });
    }
    group.finish();
}

fn shells(c: &mut Criterion) {
    let mut group = c.benchmark_group("shells");
    for n in [128, 256] {
        let theta = random_field(n, 2);
        group.bench_with_input(BenchmarkId::new("block_set", n), &theta, |b, th| {
            b.iter(|| BlockSet::new(th))
        });
        group.bench_with_input(BenchmarkId::new("riesz", n), &theta, |b, th| {
            b.iter(|| riesz_perp(th))
        });
        group.bench_with_input(BenchmarkId::new("flux_all_q", n), &theta, |b, th| {
            b.iter(|| {
                let calc = FluxCalculator::new(th).unwrap();
                (-1..=calc.q_max())
                    .map(|q| calc.report(q, false).unwrap().pi_q)
                    .sum::<f64>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, shells);
criterion_main!(benches);
