//! Reference values computed independently with mpmath at 60 digits.

use qtriterm::{phi21, qpoch_finite, qpoch_infinite, Precision, QReal, SeriesControl};

fn p50(s: &str) -> QReal {
    Precision::DEFAULT.parse(s).unwrap()
}

fn close(got: &QReal, want: &str, rel: i32) {
    let w = p50(want);
    let err = ((got - &w) / w.clone()).abs();
    assert!(err < Precision::DEFAULT.pow10(rel), "got {got}, want {want}, rel err {err}");
}

#[test]
fn phi21_reference_values() {
    let ctrl = SeriesControl::new(Precision::DEFAULT);
    let v = phi21(&p50("0.6"), &p50("0.7"), &p50("0.55"), &p50("0.4"), &p50("0.3"), &ctrl).unwrap();
    close(&v, "1.23736378316902281427430214360633809984827642", -43);
    let v = phi21(&p50("0.25"), &p50("0.8"), &p50("0.45"), &p50("0.7"), &p50("0.6"), &ctrl).unwrap();
    close(&v, "2.51791016079678608826779307194465905143948619", -43);
}

#[test]
fn terminating_series() {
    let ctrl = SeriesControl::new(Precision::DEFAULT);
    let q = p50("0.3");
    let b = q.powi(-3);
    let v = phi21(&p50("0.6"), &b, &p50("0.55"), &p50("0.4"), &q, &ctrl).unwrap();
    close(&v, "-13.6847211571271870543311620217692085620006478", -40);
}

#[test]
fn qpoch_reference_values() {
    let ctrl = SeriesControl::new(Precision::DEFAULT);
    let (a, q) = (p50("0.6"), p50("0.3"));
    close(&qpoch_infinite(&a, &q, &ctrl).unwrap(), "0.303145342713069760212611720023360712872169514", -43);
    close(&qpoch_infinite(&q, &q, &ctrl).unwrap(), "0.612648154213256524117652074619361242844169553", -43);
    close(&qpoch_finite(&a, 5, &q).unwrap(), "0.303777764314816", -45);
    close(&qpoch_finite(&a, -3, &q).unwrap(), "-0.00831536803202956575300277178934400985525100092", -43);
}

#[test]
fn q_binomial_reference_value() {
    // φ(a, b; b; x) = (ax)_∞ / (x)_∞
    let ctrl = SeriesControl::new(Precision::DEFAULT);
    let v = phi21(&p50("0.6"), &p50("0.7"), &p50("0.7"), &p50("0.4"), &p50("0.3"), &ctrl).unwrap();
    close(&v, "1.36415976090777288384394839436921241315889982", -43);
}
