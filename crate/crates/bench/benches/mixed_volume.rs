use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use trop_bench::{support_product, tuple};
use trop_core::polytope::{mixed_volume_facet_recursion, mixed_volume_polarization};
use trop_core::tropical::{formula_star, formula_star_float, mixed_volume_from_product};

fn mixed_volumes(c: &mut Criterion) {
    let mut group = c.benchmark_group("mixed_volume");
    group.sample_size(10);
    for dim in [2usize, 3] {
        let ps = tuple(dim, 6, 11);
        let f = support_product(&ps);
        group.bench_with_input(BenchmarkId::new("polarization", dim), &ps, |b, ps| {
            b.iter(|| mixed_volume_polarization(black_box(ps)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("facet", dim), &ps, |b, ps| {
            b.iter(|| mixed_volume_facet_recursion(black_box(ps)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("delta", dim), &f, |b, f| {
            b.iter(|| mixed_volume_from_product(black_box(f)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("star", dim), &f, |b, f| b.iter(|| formula_star(black_box(f)).unwrap()));
        group.bench_with_input(BenchmarkId::new("star_float", dim), &f, |b, f| {
            b.iter(|| formula_star_float(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn products(c: &mut Criterion) {
    let ps = tuple(3, 8, 5);
    c.bench_function("support_product_dim3", |b| b.iter(|| support_product(black_box(&ps))));
}

criterion_group!(benches, mixed_volumes, products);
criterion_main!(benches);
