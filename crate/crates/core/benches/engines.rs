use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use moyal::exec::Execution;
use moyal::grid::{sample, star_numeric_with, GridSpec};
use moyal::models::{damped_wigner, DampedParams, DampedWigner};
use moyal::negativity::{damped_box, eta_grid};

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn star(c: &mut Criterion) {
    let mut group = c.benchmark_group("star_numeric");
    group.sample_size(10);
    let w = damped_wigner(&DampedParams::new(0.5, 2).unwrap());
    for n in [32, 64] {
        let f = sample(&w, &GridSpec::square(8.0, n).unwrap()).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| {
                b.iter(|| star_numeric_with(f, f, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn eta(c: &mut Criterion) {
    let mut group = c.benchmark_group("eta_grid");
    group.sample_size(10);
    let dw = DampedWigner::new(DampedParams::new(0.5, 3).unwrap());
    let rect = damped_box(&dw.params);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| eta_grid(|q, p| dw.value(q, p), &rect, 1e-6, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, star, eta);
criterion_main!(benches);
