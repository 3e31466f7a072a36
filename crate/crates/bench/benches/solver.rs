use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sqg_bench::random_field;
use sqg_core::solver::{InitialCondition, Stepper, TimeStep};
use sqg_core::SolverConfig;

fn rk4_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("rk4_step");
    for n in [128, 256] {
        let theta = random_field(n, 3);
        let mut cfg = SolverConfig::new(
            *theta.grid(),
            InitialCondition::SingleMode {
                k1: 1,
                k2: 0,
                amplitude: 1.0,
            },
        );
        cfg.dt = TimeStep::Fixed(1e-3);
        let stepper = Stepper::new(&cfg, 1e-3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &theta, |b, th| {
            b.iter(|| stepper.step_coeffs(th.coeffs()))
        });
    }
    group.finish();
}

criterion_group!(benches, rk4_step);
criterion_main!(benches);
