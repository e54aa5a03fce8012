use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use slimlat::generate::generate_ssl;
use slimlat::par::{map, with_jobs};
use slimlat::properties::{builtin_pattern_p81, check_retracts_property};

// `Some(1)` pins the pool to one worker; `None` uses every core.
const MODES: [(&str, Option<usize>); 2] = [("sequential", Some(1)), ("parallel", None)];

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate_ssl_10");
    g.sample_size(10);
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| with_jobs(jobs, || generate_ssl(10))));
    }
    g.finish();
}

fn p81_sweep(c: &mut Criterion) {
    let corpus = generate_ssl(10);
    let p = builtin_pattern_p81();
    let mut g = c.benchmark_group("p81_retract_sweep_10");
    g.sample_size(10);
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_jobs(jobs, || map(&corpus, |s| check_retracts_property(&s.lattice, &p).unwrap().passed())))
        });
    }
    g.finish();
}

criterion_group!(benches, generation, p81_sweep);
criterion_main!(benches);
