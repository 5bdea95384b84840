use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qtriterm::coeff::{contiguous, relation_residual};
use qtriterm::{phi21, qpoch_infinite, SeriesControl, ShiftVector};
use qtriterm_bench::{precisions, reference_point};

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("phi21");
    for prec in precisions() {
        let p = reference_point(prec);
        let ctrl = SeriesControl::new(prec);
        g.bench_with_input(BenchmarkId::from_parameter(prec.digits()), &p, |bch, p| {
            bch.iter(|| phi21(&p.a, &p.b, &p.c, black_box(&p.x), &p.q, &ctrl).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("qpoch_infinite");
    for prec in precisions() {
        let p = reference_point(prec);
        let ctrl = SeriesControl::new(prec);
        g.bench_with_input(BenchmarkId::from_parameter(prec.digits()), &p, |bch, p| {
            bch.iter(|| qpoch_infinite(black_box(&p.a), &p.q, &ctrl).unwrap())
        });
    }
    g.finish();
}

fn coefficients(c: &mut Criterion) {
    let s = ShiftVector::new(2, -1, 1, 3);
    let mut g = c.benchmark_group("coefficients");
    g.sample_size(20);
    for prec in precisions() {
        let p = reference_point(prec);
        let ctrl = SeriesControl::new(prec);
        g.bench_with_input(BenchmarkId::new("series", prec.digits()), &p, |bch, p| {
            bch.iter(|| relation_residual(black_box(&s), p, &ctrl).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("contiguous", prec.digits()), &p, |bch, p| {
            bch.iter(|| contiguous::coefficients(black_box(&s), p).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, series, coefficients);
criterion_main!(benches);
