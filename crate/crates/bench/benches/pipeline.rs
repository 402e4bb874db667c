use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sofic_bench::{coset_instances, folding_inputs};
use sofic_core::{
    approximate, biregular_approx, core_graph, hall_completion, verify, BuildOptions, GroupElement, Rational, Word,
};

fn folding(c: &mut Criterion) {
    let mut group = c.benchmark_group("core_graph");
    for (k, gens) in folding_inputs() {
        group.bench_with_input(BenchmarkId::from_parameter(k), &gens, |b, gens| b.iter(|| core_graph(gens, 2).unwrap()));
    }
    group.finish();
}

fn hall(c: &mut Criterion) {
    let graph = core_graph(&[Word::parse("aab", 2).unwrap(), Word::parse("bab", 2).unwrap()], 2).unwrap();
    let avoid: Vec<Word> = ["a", "b", "ab", "Ba", "aa"].iter().map(|s| Word::parse(s, 2).unwrap()).collect();
    c.bench_function("hall_completion", |b| b.iter(|| hall_completion(&graph, &avoid).unwrap()));
}

fn build_and_verify(c: &mut Criterion) {
    let zero = Rational::from_integer(0);
    let options = BuildOptions::default();
    let mut group = c.benchmark_group("approximate");
    for (label, spec, f, e) in coset_instances() {
        group.bench_function(label, |b| b.iter(|| approximate(&spec, &f, &e, zero, &options).unwrap()));
    }
    group.finish();

    let mut group = c.benchmark_group("verify");
    for (label, spec, f, e) in coset_instances() {
        let cert = approximate(&spec, &f, &e, zero, &options).unwrap();
        group.bench_function(label, |b| b.iter(|| verify(&cert).unwrap()));
    }
    group.finish();
}

fn conjugation(c: &mut Criterion) {
    let w = |s: &str| Word::parse(s, 2).unwrap();
    let f: Vec<GroupElement> = ["a", "b"].iter().map(|s| GroupElement::Pair(w(s), w(s))).collect();
    let e: Vec<Word> = ["1", "a", "b", "baB"].iter().map(|s| w(s)).collect();
    c.bench_function("biregular_approx", |b| {
        b.iter(|| biregular_approx(2, &f, &e, Rational::from_integer(0), &BuildOptions::default()).unwrap())
    });
}

criterion_group!(benches, folding, hall, build_and_verify, conjugation);
criterion_main!(benches);
