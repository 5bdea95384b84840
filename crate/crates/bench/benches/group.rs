use criterion::{criterion_group, criterion_main, Criterion};
use qtriterm::group::{check_relations, enumerate_group, resolve};
use qtriterm::verify::{verify_all, VerifyOptions, Which};
use qtriterm::{GeneratorId, Precision};
use qtriterm_bench::reference_point;

fn group(c: &mut Criterion) {
    let (gens, names) = resolve(&GeneratorId::BASE);
    c.bench_function("enumerate_group", |b| b.iter(|| enumerate_group(&gens, &names).unwrap()));
    c.bench_function("check_relations", |b| b.iter(check_relations));
}

fn certification(c: &mut Criterion) {
    let prec = Precision::DOUBLE;
    let p = reference_point(prec);
    let opts = VerifyOptions::new(prec);
    let mut g = c.benchmark_group("verify_all");
    g.sample_size(10);
    g.bench_function("Q", |b| b.iter(|| verify_all(&p, Which::Q, &opts)));
    g.finish();
}

criterion_group!(benches, group, certification);
criterion_main!(benches);
