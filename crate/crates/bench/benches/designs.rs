use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvlab::designs::{
    hilbert_rational_design, is_degree4_design, is_degree4_design_exact, optimize_design, HilbertOptions,
    OptimizeOptions,
};
use curvlab::Design;

fn check(c: &mut Criterion) {
    let mut g = c.benchmark_group("design_check");
    for n in [2usize, 4, 6] {
        let d = Design::cross_polytope(n).unwrap();
        g.bench_with_input(BenchmarkId::new("float", n), &d, |b, d| b.iter(|| is_degree4_design(d, 1e-10).unwrap()));
    }
    let h = hilbert_rational_design(3, &HilbertOptions::default()).unwrap().design;
    g.bench_function("exact/3", |b| b.iter(|| is_degree4_design_exact(&h).unwrap()));
    g.finish();
}

fn construct(c: &mut Criterion) {
    let mut g = c.benchmark_group("design_construct");
    g.sample_size(10);
    for n in [2usize, 3] {
        g.bench_with_input(BenchmarkId::new("hilbert", n), &n, |b, &n| {
            b.iter(|| hilbert_rational_design(n, &HilbertOptions::default()).unwrap())
        });
    }
    let opts = OptimizeOptions { restarts: 4, iters: 5_000, ..Default::default() };
    g.bench_function("optimize/n2_N5", |b| b.iter(|| optimize_design(2, 5, &opts).unwrap()));
    g.finish();
}

criterion_group!(benches, check, construct);
criterion_main!(benches);
