use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use markoff::oracle::{
    enumerate_solutions, enumerate_solutions_seq, EnumerationConvention, DEFAULT_ENUMERATION_BUDGET,
};
use markoff::{parse_poly, MarkoffContext, PrimeModulus};

fn ctx(p: u64, a: &str) -> MarkoffContext {
    let m = PrimeModulus::new(p).unwrap();
    MarkoffContext::new(parse_poly(a, m).unwrap()).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_solutions");
    group.sample_size(10);
    for (p, a, h) in [(5, "t", 2), (13, "1", 1), (5, "t", 3)] {
        let ctx = ctx(p, a);
        let label = format!("q{p}_A{a}_h{h}");
        group.bench_with_input(BenchmarkId::new("parallel", &label), &h, |b, &h| {
            b.iter(|| {
                enumerate_solutions(
                    &ctx,
                    h,
                    EnumerationConvention::Ordered,
                    DEFAULT_ENUMERATION_BUDGET,
                )
                .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", &label), &h, |b, &h| {
            b.iter(|| {
                enumerate_solutions_seq(
                    &ctx,
                    h,
                    EnumerationConvention::Ordered,
                    DEFAULT_ENUMERATION_BUDGET,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
