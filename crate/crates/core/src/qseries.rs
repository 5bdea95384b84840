//! q-shifted factorials and the basic hypergeometric series ₂φ₁.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Precision, QReal};
use crate::coeff::ShiftVector;

/// Continuous parameters `(a, b, c, x, q)`.
///
/// [`BasePoint::new`] enforces the verification domain: `0 < q < 1` and
/// `a, b, c, x > 0`. Points derived from a valid point through shifts or group
/// actions stay inside that domain automatically.
#[derive(Clone, Debug, PartialEq)]
pub struct BasePoint {
    pub a: QReal,
    pub b: QReal,
    pub c: QReal,
    pub x: QReal,
    pub q: QReal,
}

impl BasePoint {
    pub fn new(a: QReal, b: QReal, c: QReal, x: QReal, q: QReal) -> Result<Self> {
        let p = BasePoint { a, b, c, x, q };
        p.validate()?;
        Ok(p)
    }

    /// Parse five decimal literals in `(a, b, c, x, q)` order.
    pub fn parse(prec: Precision, a: &str, b: &str, c: &str, x: &str, q: &str) -> Result<Self> {
        BasePoint::new(prec.parse(a)?, prec.parse(b)?, prec.parse(c)?, prec.parse(x)?, prec.parse(q)?)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_positive() && self.q < self.q.precision().one()) {
            return Err(Error::Domain(format!("q must lie in (0, 1), got {}", self.q)));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("x", &self.x)] {
            if !v.is_positive() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn precision(&self) -> Precision {
        self.q.precision()
    }

    pub fn with_precision(&self, prec: Precision) -> BasePoint {
        BasePoint {
            a: self.a.with_precision(prec),
            b: self.b.with_precision(prec),
            c: self.c.with_precision(prec),
            x: self.x.with_precision(prec),
            q: self.q.with_precision(prec),
        }
    }

    /// `(a q^k, b q^l, c q^m, x q^n)`.
    pub fn shifted(&self, s: &ShiftVector) -> BasePoint {
        BasePoint {
            a: &self.a * &self.q.powi(s.k),
            b: &self.b * &self.q.powi(s.l),
            c: &self.c * &self.q.powi(s.m),
            x: &self.x * &self.q.powi(s.n),
            q: self.q.clone(),
        }
    }

    /// Slot values in `(a, b, c, x)` order.
    pub fn slots(&self) -> [&QReal; 4] {
        [&self.a, &self.b, &self.c, &self.x]
    }

    pub fn to_f64s(&self) -> [f64; 5] {
        [self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.x.to_f64(), self.q.to_f64()]
    }
}

/// Which denominator the ₂φ₁ terms carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `(a)_i (b)_i / ((c)_i (q)_i)`, the convention the Heine transformations need.
    #[default]
    Standard,
    /// `(a)_i (b)_i / (c)_i` with no `(q)_i`. Heine's formulas fail under it.
    Literal,
}

/// Truncation control for series and infinite products.
#[derive(Clone, Debug)]
pub struct SeriesControl {
    pub tol: QReal,
    pub max_terms: usize,
    pub consecutive_small: usize,
    pub convention: Convention,
}

impl SeriesControl {
    pub const DEFAULT_MAX_TERMS: usize = 100_000;

    pub fn new(prec: Precision) -> Self {
        SeriesControl {
            tol: prec.default_tol(),
            max_terms: Self::DEFAULT_MAX_TERMS,
            consecutive_small: 3,
            convention: Convention::Standard,
        }
    }

    pub fn with_tol(mut self, tol: QReal) -> Result<Self> {
        if !tol.is_positive() {
            return Err(Error::Config(format!("series tolerance must be positive, got {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn with_consecutive_small(mut self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("consecutive_small must be at least 2".into()));
        }
        self.consecutive_small = n;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn precision(&self) -> Precision {
        self.tol.precision()
    }
}

fn check_q(q: &QReal) -> Result<()> {
    if q.abs() >= q.precision().one() {
        return Err(Error::Domain(format!("|q| must be < 1, got {q}")));
    }
    Ok(())
}

/// `(a; q)_i` for any integer `i`.
///
/// For `i < 0` this is `1 / ∏_{j=1}^{|i|} (1 - a q^{-j})`, the value forced by
/// `(a)_i = (a)_∞ / (a q^i)_∞`.
pub fn qpoch_finite(a: &QReal, i: i64, q: &QReal) -> Result<QReal> {
    let mut slack = f64::INFINITY;
    qpoch_finite_tracked(a, i, q, &mut slack)
}

/// [`qpoch_finite`] that also lowers `slack` to the smallest `|1 - a q^j|` it touched.
pub(crate) fn qpoch_finite_tracked(a: &QReal, i: i64, q: &QReal, slack: &mut f64) -> Result<QReal> {
    let prec = a.precision().max(q.precision());
    let one = prec.one();
    if i >= 0 {
        let mut acc = one.clone();
        let mut aqj = a.clone();
        for _ in 0..i {
            let f = &one - &aqj;
            *slack = slack.min(f.abs().to_f64());
            acc = acc * f;
            aqj = aqj * q;
        }
        return Ok(acc);
    }
    let margin = prec.pole_margin();
    let qinv = q.recip();
    let mut den = one.clone();
    let mut aqj = a * &qinv;
    for j in 1..=(-i) {
        let f = &one - &aqj;
        *slack = slack.min(f.abs().to_f64());
        if f.abs() < margin {
            return Err(Error::Pole(format!("(a;q)_{i} has vanishing factor 1 - a q^-{j} at a = {a}")));
        }
        den = den * f;
        aqj = aqj * &qinv;
    }
    Ok(one / den)
}

/// `(a; q)_∞`, truncated once `|a q^j| < tol` for `consecutive_small` successive `j`.
pub fn qpoch_infinite(a: &QReal, q: &QReal, ctrl: &SeriesControl) -> Result<QReal> {
    check_q(q)?;
    let prec = a.precision().max(q.precision());
    let one = prec.one();
    let mut acc = one.clone();
    let mut aqj = a.clone();
    let mut small = 0usize;
    for _ in 0..ctrl.max_terms {
        if aqj.abs() < ctrl.tol {
            small += 1;
            if small >= ctrl.consecutive_small {
                return Ok(acc);
            }
        } else {
            small = 0;
        }
        acc = acc * (&one - &aqj);
        if acc.is_zero() {
            return Ok(acc);
        }
        aqj = aqj * q;
    }
    Err(Error::Convergence(format!(
        "(a;q)_inf with a = {a} needs more than {} factors",
        ctrl.max_terms
    )))
}

/// Value of a truncated series with the number of terms summed.
#[derive(Clone, Debug)]
pub struct SeriesSum {
    pub value: QReal,
    pub terms_used: usize,
}

/// ₂φ₁(a, b; c; q, x).
pub fn phi21(a: &QReal, b: &QReal, c: &QReal, x: &QReal, q: &QReal, ctrl: &SeriesControl) -> Result<QReal> {
    phi21_sum(a, b, c, x, q, ctrl).map(|s| s.value)
}

/// [`phi21`] returning the term count as well.
///
/// Terms follow `t_{i+1} = t_i (1 - a q^i)(1 - b q^i) x / ((1 - c q^i)(1 - q^{i+1}))`
/// with `t_0 = 1`; the last factor is dropped under [`Convention::Literal`].
pub fn phi21_sum(
    a: &QReal,
    b: &QReal,
    c: &QReal,
    x: &QReal,
    q: &QReal,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    check_q(q)?;
    let prec = [a, b, c, x, q].iter().map(|v| v.precision()).max().unwrap_or_default();
    let one = prec.one();
    if x.abs() >= one {
        return Err(Error::Domain(format!("₂φ₁ needs |x| < 1, got x = {x}")));
    }
    let margin = prec.pole_margin();
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut qi = one.clone();
    let mut small = 0usize;
    for i in 0..ctrl.max_terms {
        let den_c = &one - &(c * &qi);
        if den_c.abs() < margin {
            return Err(Error::Pole(format!("c = {c} sits on q^-{i}")));
        }
        let next_qi = &qi * q;
        let mut num = (&one - &(a * &qi)) * (&one - &(b * &qi)) * x;
        let mut den = den_c;
        if ctrl.convention == Convention::Standard {
            den = den * (&one - &next_qi);
        }
        num = num * &term;
        term = num / den;
        sum = &sum + &term;
        qi = next_qi;
        if term.is_zero() || term.abs() < &ctrl.tol * &sum.abs() {
            small += 1;
            if small >= ctrl.consecutive_small {
                return Ok(SeriesSum { value: sum, terms_used: i + 2 });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Convergence(format!(
        "₂φ₁ at x = {x} needs more than {} terms",
        ctrl.max_terms
    )))
}

/// The two Heine transformations of ₂φ₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heine {
    /// `φ(a,b;c;x) = (a)_∞(bx)_∞/((c)_∞(x)_∞) · φ(x, c/a; bx; a)`.
    First,
    /// `φ(a,b;c;x) = (abx/c)_∞/(x)_∞ · φ(c/a, c/b; c; abx/c)`.
    Third,
}

/// Relative residual `|lhs - rhs| / |lhs|` of a Heine transformation at `p`.
pub fn heine_residual(form: Heine, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let BasePoint { a, b, c, x, q } = p;
    let lhs = phi21(a, b, c, x, q, ctrl)?;
    let pinf = |z: &QReal| qpoch_infinite(z, q, ctrl);
    let rhs = match form {
        Heine::First => {
            let bx = b * x;
            let pre = pinf(a)? * pinf(&bx)? / (pinf(c)? * pinf(x)?);
            pre * phi21(x, &(c / a), &bx, a, q, ctrl)?
        }
        Heine::Third => {
            let z = a * b * x / c;
            let pre = pinf(&z)? / pinf(x)?;
            pre * phi21(&(c / a), &(c / b), c, &z, q, ctrl)?
        }
    };
    Ok((&lhs - &rhs).abs() / lhs.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dbl(v: f64) -> QReal {
        Precision::DOUBLE.real(v)
    }

    #[test]
    fn finite_examples() {
        let p = Precision::DEFAULT;
        let a = p.parse("0.6").unwrap();
        let q = p.parse("0.3").unwrap();
        let one = p.one();
        assert_eq!(qpoch_finite(&a, 0, &q).unwrap(), one);
        let three = (&one - &a) * (&one - &(&a * &q)) * (&one - &(&a * &q.powi(2)));
        assert_eq!(qpoch_finite(&a, 3, &q).unwrap(), three);
        let neg = one.clone() / ((&one - &(&a / &q)) * (&one - &(&a / &q.powi(2))));
        let got = qpoch_finite(&a, -2, &q).unwrap();
        assert!((got - neg).abs() < p.pow10(-48));
    }

    #[test]
    fn finite_negative_pole() {
        let q = dbl(0.5);
        // a = q^2 makes 1 - a q^-2 vanish
        let a = dbl(0.25);
        assert!(matches!(qpoch_finite(&a, -2, &q), Err(Error::Pole(_))));
        assert!(qpoch_finite(&a, -1, &q).is_ok());
        // positive index with a vanishing factor is simply zero
        assert!(qpoch_finite(&dbl(1.0), 2, &q).unwrap().is_zero());
    }

    #[test]
    fn infinite_examples() {
        let ctrl = SeriesControl::new(Precision::DOUBLE);
        let q = dbl(0.5);
        assert_eq!(qpoch_infinite(&dbl(0.0), &q, &ctrl).unwrap().to_f64(), 1.0);
        assert!(qpoch_infinite(&dbl(1.0), &q, &ctrl).unwrap().is_zero());
    }

    #[test]
    fn infinite_convergence_error() {
        let ctrl = SeriesControl::new(Precision::DOUBLE).with_max_terms(5).unwrap();
        assert!(matches!(
            qpoch_infinite(&dbl(0.5), &dbl(0.9), &ctrl),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn phi_trivial_cases() {
        let ctrl = SeriesControl::new(Precision::DOUBLE);
        let (a, b, c, q) = (dbl(0.6), dbl(0.7), dbl(0.55), dbl(0.3));
        assert_eq!(phi21(&a, &b, &c, &dbl(0.0), &q, &ctrl).unwrap().to_f64(), 1.0);
        assert_eq!(phi21(&dbl(1.0), &b, &c, &dbl(0.4), &q, &ctrl).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn phi_errors() {
        let ctrl = SeriesControl::new(Precision::DOUBLE);
        let (a, b, q) = (dbl(0.6), dbl(0.7), dbl(0.5));
        // c = q^-2
        assert!(matches!(
            phi21(&a, &b, &dbl(4.0), &dbl(0.4), &q, &ctrl),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            phi21(&a, &b, &dbl(0.55), &dbl(1.2), &q, &ctrl),
            Err(Error::Domain(_))
        ));
        let short = SeriesControl::new(Precision::DOUBLE).with_max_terms(3).unwrap();
        assert!(matches!(
            phi21(&a, &b, &dbl(0.55), &dbl(0.9), &q, &short),
            Err(Error::Convergence(_))
        ));
    }

    #[test]
    fn q_binomial_sum() {
        // ₂φ₁(a, b; b; q, x) = (ax)_∞/(x)_∞ by the q-binomial theorem
        let p = Precision::DEFAULT;
        let ctrl = SeriesControl::new(p);
        let (a, b, x, q) = (p.parse("0.6").unwrap(), p.parse("0.35").unwrap(), p.parse("0.4").unwrap(), p.parse("0.3").unwrap());
        let lhs = phi21(&a, &b, &b, &x, &q, &ctrl).unwrap();
        let rhs = qpoch_infinite(&(&a * &x), &q, &ctrl).unwrap() / qpoch_infinite(&x, &q, &ctrl).unwrap();
        assert!((lhs - rhs).abs() < p.pow10(-47));
    }

    #[test]
    fn control_validation() {
        let c = SeriesControl::new(Precision::DOUBLE);
        assert!(c.clone().with_consecutive_small(1).is_err());
        assert!(c.clone().with_max_terms(0).is_err());
        assert!(c.with_tol(dbl(0.0)).is_err());
    }

    #[test]
    fn base_point_domain() {
        let p = Precision::DOUBLE;
        assert!(BasePoint::parse(p, "0.6", "0.7", "0.55", "0.4", "1.0").is_err());
        assert!(BasePoint::parse(p, "-0.6", "0.7", "0.55", "0.4", "0.3").is_err());
        assert!(BasePoint::parse(p, "0.6", "0.7", "0.55", "0.4", "0.3").is_ok());
    }
}
