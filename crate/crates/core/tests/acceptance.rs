//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are still evaluated in full and
//! reported as FAIL; the process exits non-zero only when the set of failing
//! criteria differs from that list.

use std::time::{Duration, Instant};

use qtriterm::coeff::{
    antisymmetry_residual, lambda_identity_residual, relation_residual, wronskian, y_unit_closed,
};
use qtriterm::group::{
    check_relations, conjugated_group, enumerate_group, full_group, resolve, s4_isomorphism_holds, GeneratorId,
};
use qtriterm::qseries::{heine_residual, Heine};
use qtriterm::real::rel_diff;
use qtriterm::verify::{
    find_admissible_many, verify_all, verify_base, verify_bridge, AdmissibleKind, Constraints, SampleBox, VerifyOptions,
    Which,
};
use qtriterm::{BasePoint, Precision, QReal, Route, SeriesControl, ShiftVector};

/// Criterion 2 asks `R(0,0,1,1)` to equal `1 - (1-a)(1-b)cq/((c-a)(c-b))`; the
/// relation itself gives the same expression without the factor `q`.
const EXPECTED_FAILURES: &[usize] = &[2];

// tolerances
const C1_ABS: f64 = 1e-12;
const C1_TIME: Duration = Duration::from_secs(1);
const C2_REL: f64 = 1e-9;
const C3_REL_DOUBLE: f64 = 1e-9;
const C3_REL_50: f64 = 1e-30;
const C4_TIME: Duration = Duration::from_secs(1);
const C5_REL: f64 = 1e-9;
const C6_BASE_DOUBLE: f64 = 1e-6;
const C6_BASE_50: f64 = 1e-30;
const C7_REL: f64 = 1e-9;
const C8_HEINE: f64 = 1e-10;
const C8_REL: f64 = 1e-9;

// point counts
const C1_POINTS: usize = 5;
const C2_POINTS: usize = 10;
const C3_POINTS: usize = 3;
const C5_POINTS: usize = 20;
const C6_POINTS: usize = 2;
const C7_POINTS: usize = 20;
const C8_POINTS: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn sci(v: f64) -> String {
    format!("{v:.2e}")
}

fn fmt_point(p: &BasePoint) -> String {
    let [a, b, c, x, q] = p.to_f64s();
    format!("(a,b,c,x,q)=({a},{b},{c},{x},{q})")
}

fn orbit_points(seed: u64, count: usize, prec: Precision) -> Vec<BasePoint> {
    find_admissible_many(seed, count, &Constraints::default(), prec)
        .expect("admissible search")
        .into_iter()
        .map(|a| a.point)
        .collect()
}

fn series_points(seed: u64, count: usize, cons: &Constraints, prec: Precision) -> Vec<BasePoint> {
    find_admissible_many(seed, count, cons, prec).expect("admissible search").into_iter().map(|a| a.point).collect()
}

fn rel(a: &QReal, b: &QReal) -> f64 {
    rel_diff(a, b, &a.precision().pole_margin()).to_f64()
}

/// Running maximum that turns any evaluation error into a failure.
#[derive(Default)]
struct Worst {
    max: f64,
    errors: Vec<String>,
}

impl Worst {
    fn take(&mut self, v: qtriterm::Result<f64>, ctx: impl FnOnce() -> String) {
        match v {
            Ok(e) if e.is_finite() => self.max = self.max.max(e),
            Ok(e) => self.errors.push(format!("{}: non-finite {e}", ctx())),
            Err(e) => self.errors.push(format!("{}: {e}", ctx())),
        }
    }

    fn within(&self, tol: f64) -> bool {
        self.errors.is_empty() && self.max < tol
    }

    fn describe(&self) -> String {
        match self.errors.first() {
            None => format!("max {}", sci(self.max)),
            Some(e) => format!("max {}, {} evaluation errors, first: {e}", sci(self.max), self.errors.len()),
        }
    }
}

fn criterion1() -> Outcome {
    let prec = Precision::DOUBLE;
    let points = orbit_points(101, C1_POINTS, prec);
    let ctrl = SeriesControl::new(prec);
    let start = Instant::now();
    let mut w = Worst::default();
    let cases = [(ShiftVector::ZERO, 0.0, 1.0), (ShiftVector::UNIT, 1.0, 0.0)];
    for p in &points {
        for &(s, q_want, r_want) in &cases {
            for route in [Route::Series, Route::Contiguous] {
                let err = |v: qtriterm::Result<QReal>, want: f64| v.map(|v| (v.to_f64() - want).abs());
                w.take(err(route.q(&s, p, &ctrl), q_want), || format!("Q{s} {route:?} at {}", fmt_point(p)));
                w.take(err(route.r(&s, p, &ctrl), r_want), || format!("R{s} {route:?} at {}", fmt_point(p)));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: w.within(C1_ABS) && elapsed < C1_TIME,
        detail: format!(
            "{} points, both routes, abs error {} (tol {}), {:.3}s (limit {}s)",
            points.len(),
            w.describe(),
            sci(C1_ABS),
            elapsed.as_secs_f64(),
            C1_TIME.as_secs()
        ),
    }
}

fn criterion2() -> Outcome {
    let prec = Precision::DOUBLE;
    let points = orbit_points(202, C2_POINTS, prec);
    let ctrl = SeriesControl::new(prec);
    let s = ShiftVector::new(0, 0, 1, 1);
    let (mut wq, mut wr, mut wr_qfree) = (Worst::default(), Worst::default(), Worst::default());
    for p in &points {
        let BasePoint { a, b, c, x, q } = p;
        let one = prec.one();
        let q_closed = (&one - a) * (&one - b) * (c - &(a * b * x)) / ((c - a) * (c - b));
        let r_stated = &one - &((&one - a) * (&one - b) * c * q / ((c - a) * (c - b)));
        let r_qfree = &one - &((&one - a) * (&one - b) * c / ((c - a) * (c - b)));
        for route in [Route::Series, Route::Contiguous] {
            let ctx = || format!("{route:?} at {}", fmt_point(p));
            wq.take(route.q(&s, p, &ctrl).map(|v| rel(&v, &q_closed)), ctx);
            let r = route.r(&s, p, &ctrl);
            wr.take(r.clone().map(|v| rel(&v, &r_stated)), ctx);
            wr_qfree.take(r.map(|v| rel(&v, &r_qfree)), ctx);
        }
    }
    Outcome {
        pass: wq.within(C2_REL) && wr.within(C2_REL),
        detail: format!(
            "{} points, Q vs closed form {}, R vs 1-(1-a)(1-b)cq/((c-a)(c-b)) {} (tol {}); \
             R vs 1-(1-a)(1-b)c/((c-a)(c-b)) {}",
            points.len(),
            wq.describe(),
            wr.describe(),
            sci(C2_REL),
            wr_qfree.describe()
        ),
    }
}

/// Worst residual and largest `|Q|`, `|R|` over the cube.
fn sweep_at(points: &[BasePoint], prec: Precision) -> (Worst, f64) {
    let ctrl = SeriesControl::new(prec);
    let mut w = Worst::default();
    let mut size = 0.0f64;
    for p in points {
        let p = p.with_precision(prec);
        for s in ShiftVector::cube(3) {
            let r = relation_residual(&s, &p, &ctrl);
            if let Ok(r) = &r {
                size = size.max(r.q.to_f64().abs()).max(r.r.to_f64().abs());
            }
            w.take(r.map(|r| r.residual.to_f64()), || format!("{s} at {}", fmt_point(&p)));
        }
    }
    (w, size)
}

fn criterion3() -> Outcome {
    let cons = Constraints::series(ShiftVector::cube(3), SampleBox::sweep());
    let points = series_points(303, C3_POINTS, &cons, Precision::DEFAULT);
    let start = Instant::now();
    let (dbl, size) = sweep_at(&points, Precision::DOUBLE);
    let (fifty, _) = sweep_at(&points, Precision::DEFAULT);
    Outcome {
        pass: dbl.within(C3_REL_DOUBLE) && fifty.within(C3_REL_50),
        detail: format!(
            "2401 shifts x {} points, max |Q|,|R| {}, double {} (tol {}), 50 digits {} (tol {}), {:.1}s",
            points.len(),
            sci(size),
            dbl.describe(),
            sci(C3_REL_DOUBLE),
            fifty.describe(),
            sci(C3_REL_50),
            start.elapsed().as_secs_f64()
        ),
    }
}

fn criterion4() -> Outcome {
    use GeneratorId::*;
    let start = Instant::now();
    let order = |ids: &[GeneratorId]| {
        let (g, n) = resolve(ids);
        enumerate_group(&g, &n).map(|g| g.order()).unwrap_or(0)
    };
    let orders = [
        order(&[Sigma0, Sigma1, Sigma2, Sigma3]),
        order(&[Sigma1, Sigma2, Sigma3]),
        order(&[Sigma3, Sigma4, Sigma5]),
        full_group().order(),
        conjugated_group().order(),
    ];
    let relations = check_relations();
    let failed: Vec<&str> = relations.iter().filter(|r| !r.holds).map(|r| r.name.as_str()).collect();
    let iso = s4_isomorphism_holds();
    let elapsed = start.elapsed();
    let orders_ok = orders == [96, 48, 24, 96, 96];
    Outcome {
        pass: orders_ok && failed.is_empty() && iso && elapsed < C4_TIME,
        detail: format!(
            "orders <s0..s3>={} <s1,s2,s3>={} <s3,s4,s5>={} conjugated={}, {} relations, {} failed {:?}, \
             S4 isomorphism {}, {:.3}s (limit {}s)",
            orders[0],
            orders[1],
            orders[2],
            orders[4],
            relations.len(),
            failed.len(),
            failed,
            iso,
            elapsed.as_secs_f64(),
            C4_TIME.as_secs()
        ),
    }
}

fn criterion5() -> Outcome {
    let prec = Precision::DOUBLE;
    let points = orbit_points(505, C5_POINTS, prec);
    let mut opts = VerifyOptions::new(prec);
    opts.base_tol = prec.real(C5_REL);
    let (mut checks, mut failures, mut worst) = (0, 0, 0.0f64);
    for p in &points {
        for report in [verify_base(p, Which::Q, &opts), verify_base(p, Which::R, &opts), verify_bridge(p, &opts)] {
            checks += report.identities;
            failures += report.failures;
            if let Some(e) = report.max_error {
                worst = worst.max(e.parse().unwrap_or(f64::INFINITY));
            }
        }
    }
    Outcome {
        pass: failures == 0 && checks == points.len() * 9 * ShiftVector::default_suite().len(),
        detail: format!(
            "{} points x 4 shifts x 9 formulas = {checks} checks, {failures} failures, max rel error {} (tol {})",
            points.len(),
            sci(worst),
            sci(C5_REL)
        ),
    }
}

fn criterion6() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (prec, base) in [(Precision::DOUBLE, C6_BASE_DOUBLE), (Precision::DEFAULT, C6_BASE_50)] {
        let points = orbit_points(606, C6_POINTS, prec);
        let mut opts = VerifyOptions::new(prec);
        opts.base_tol = prec.real(base);
        for which in [Which::Q, Which::R] {
            let (mut n, mut fails, mut worst) = (0, 0, 0.0f64);
            for p in &points {
                let report = verify_all(p, which, &opts);
                n += report.identities;
                fails += report.failures;
                if let Some(e) = report.max_error {
                    worst = worst.max(e.parse().unwrap_or(f64::INFINITY));
                }
            }
            pass &= fails == 0 && n == points.len() * 96 * opts.shifts.len();
            lines.push(format!("{which} {} digits: {n} identities, {fails} failures, max {}", prec.digits(), sci(worst)));
        }
    }
    Outcome {
        pass,
        detail: format!(
            "{} points, base tol {} / {} scaled by (1 + word length); {}",
            C6_POINTS,
            sci(C6_BASE_DOUBLE),
            sci(C6_BASE_50),
            lines.join("; ")
        ),
    }
}

fn criterion7() -> Outcome {
    let prec = Precision::DOUBLE;
    let cons = Constraints::series(vec![ShiftVector::UNIT], SampleBox::default());
    let points = series_points(707, C7_POINTS, &cons, prec);
    let ctrl = SeriesControl::new(prec);
    let mut w = Worst::default();
    for p in &points {
        let v = y_unit_closed(p, &ctrl).and_then(|closed| Ok(rel(&wronskian(&ShiftVector::UNIT, p, &ctrl)?, &closed)));
        w.take(v, || fmt_point(p));
    }
    Outcome {
        pass: w.within(C7_REL),
        detail: format!("{} points, rel error {} (tol {})", points.len(), w.describe(), sci(C7_REL)),
    }
}

fn criterion8() -> Outcome {
    let prec = Precision::DOUBLE;
    let cons = Constraints {
        kind: AdmissibleKind::Series,
        sigma2_image: true,
        ..Constraints::default()
    };
    let points = series_points(808, C8_POINTS, &cons, prec);
    let ctrl = SeriesControl::new(prec);
    let (mut heine, mut anti, mut lambda) = (Worst::default(), Worst::default(), Worst::default());
    let mut third_skipped = 0;
    for p in &points {
        heine.take(heine_residual(Heine::First, p, &ctrl).map(|r| r.to_f64()), || format!("first at {}", fmt_point(p)));
        let [a, b, c, x, _] = p.to_f64s();
        if (a * b * x / c).abs() < 1.0 {
            heine.take(heine_residual(Heine::Third, p, &ctrl).map(|r| r.to_f64()), || {
                format!("third at {}", fmt_point(p))
            });
        } else {
            third_skipped += 1;
        }
        for s in &cons.shifts {
            anti.take(antisymmetry_residual(s, p, &ctrl).map(|r| r.to_f64()), || format!("{s} at {}", fmt_point(p)));
            lambda.take(lambda_identity_residual(s, p, &ctrl).map(|r| r.to_f64()), || {
                format!("{s} at {}", fmt_point(p))
            });
        }
    }
    Outcome {
        pass: heine.within(C8_HEINE) && anti.within(C8_REL) && lambda.within(C8_REL) && third_skipped == 0,
        detail: format!(
            "{} points, Heine {} (tol {}, {third_skipped} points outside |abx/c|<1), \
             antisymmetry {}, lambda identity {} (tol {}) over {} shifts",
            points.len(),
            heine.describe(),
            sci(C8_HEINE),
            anti.describe(),
            lambda.describe(),
            sci(C8_REL),
            cons.shifts.len()
        ),
    }
}

fn criterion9() -> Outcome {
    let prec = Precision::DOUBLE;
    let p = &orbit_points(909, 1, prec)[0];
    let opts = VerifyOptions::new(prec);
    let mut same = true;
    for which in [Which::Q, Which::R] {
        let run = || {
            let again = orbit_points(909, 1, prec);
            serde_json::to_string_pretty(&verify_all(&again[0], which, &opts)).expect("serialize")
        };
        same &= run() == run();
    }
    Outcome {
        pass: same,
        detail: format!("verify all Q and R twice at {}, reports byte-identical: {same}", fmt_point(p)),
    }
}

fn main() {
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
    ];
    let mut failed = Vec::new();
    let mut ran = Vec::new();
    for (id, f) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        ran.push(id);
        let start = Instant::now();
        let out = f();
        let status = if out.pass { "PASS" } else { "FAIL" };
        let note = if !out.pass && EXPECTED_FAILURES.contains(&id) { " [expected]" } else { "" };
        println!("criterion {id}: {status}{note} ({:.1}s) {}", start.elapsed().as_secs_f64(), out.detail);
        if !out.pass {
            failed.push(id);
        }
    }
    let expected: Vec<usize> = EXPECTED_FAILURES.iter().copied().filter(|id| ran.contains(id)).collect();
    println!("acceptance: {} passed, {} failed {:?}, expected failures {:?}", ran.len() - failed.len(), failed.len(), failed, expected);
    if failed != expected {
        std::process::exit(1);
    }
}
