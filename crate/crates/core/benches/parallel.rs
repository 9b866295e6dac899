//! One-thread pool against the default pool on the data-parallel kernels.
//! Build with `--no-default-features` to time the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPool;

use inspectra::generate;
use inspectra::highdim::{gaussian_measure_mc, SlabFamily};
use inspectra::horizon::{horizon, horizon_mc};
use inspectra::hull::{contains_unit_sphere, PointCloud};

fn pools() -> Vec<(String, ThreadPool)> {
    let default = rayon::current_num_threads();
    let mut out = vec![("1-thread".to_string(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if default > 1 {
        out.push((format!("{default}-threads"), rayon::ThreadPoolBuilder::new().num_threads(default).build().unwrap()));
    }
    out
}

fn kernels(c: &mut Criterion) {
    let baseball = generate::baseball(250).unwrap();
    let cloud = PointCloud::from_polyline(&baseball);
    let slabs = SlabFamily::random(8, 20, 0.5, 3.0, 1).unwrap();
    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("horizon_exact", &name), |b| {
            b.iter(|| pool.install(|| horizon(&baseball).unwrap().total))
        });
        group.bench_function(BenchmarkId::new("horizon_mc_1e5", &name), |b| {
            b.iter(|| pool.install(|| horizon_mc(&baseball, 100_000, 3).unwrap().total))
        });
        group.bench_function(BenchmarkId::new("gaussian_mc_1e5", &name), |b| {
            b.iter(|| pool.install(|| gaussian_measure_mc(|x| slabs.contains(x), 8, 100_000, 5).unwrap().mean))
        });
        group.bench_function(BenchmarkId::new("contains_unit_sphere", &name), |b| {
            b.iter(|| pool.install(|| contains_unit_sphere(&cloud, 10_000).unwrap().min_slack))
        });
    }
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
