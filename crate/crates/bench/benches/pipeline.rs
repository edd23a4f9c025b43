use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use frobx_core::adjunction::{build_balanced_tensor, check_triangle_identities, TensorSide};
use frobx_core::examples::nilcoxeter;
use frobx_core::extension::{is_twisted_frobenius, SearchOptions, Verdict};

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for fx in frobx_bench::extensions() {
        group.bench_with_input(BenchmarkId::from_parameter(&fx.name), &fx, |b, fx| {
            b.iter(|| {
                let v = is_twisted_frobenius(black_box(&fx.ext), Some(&fx.trace.map), SearchOptions::default());
                assert!(matches!(v, Verdict::Certified { .. }));
            })
        });
    }
    group.finish();
}

fn adjunction(c: &mut Criterion) {
    let mut group = c.benchmark_group("adjunction");
    group.sample_size(10);
    for fx in frobx_bench::extensions().into_iter().filter(|f| f.ext.big().dim() <= 6) {
        let Verdict::Certified { certificate, .. } =
            is_twisted_frobenius(&fx.ext, Some(&fx.trace.map), SearchOptions::default())
        else {
            continue;
        };
        group.bench_function(BenchmarkId::new("tensor", &fx.name), |b| {
            b.iter(|| build_balanced_tensor(black_box(&fx.ext), TensorSide::One).dimension())
        });
        group.bench_function(BenchmarkId::new("triangle", &fx.name), |b| {
            b.iter(|| check_triangle_identities(&fx.ext, &certificate.trace.map, &certificate.dual).unwrap().holds())
        });
    }
    group.finish();
}

fn nakayama(c: &mut Criterion) {
    let mut group = c.benchmark_group("nakayama");
    for n in 2..=4 {
        let data = nilcoxeter(n).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| data.nakayama_automorphism()));
    }
    group.finish();
}

criterion_group!(benches, certify, adjunction, nakayama);
criterion_main!(benches);
