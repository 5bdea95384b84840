//! Coefficients `Q`, `R` of the three-term relation
//!
//! ```text
//! φ(aq^k, bq^l; cq^m; q, xq^n) = Q · φ(aq, bq; cq; q, x) + R · φ(a, b; c; q, x)
//! ```
//!
//! Two independent evaluation routes are provided:
//!
//! * [`Route::Series`]: `Q` from the Wronskian-type combination `Y` of the two
//!   series solutions `y₁`, `y₂`, normalised by the closed form of
//!   `Y(1,1,1,0)`; `R` from `Q` at `(k-1, l-1, m-1, n; aq, bq, cq; x)`.
//!   Needs every series involved to converge.
//! * [`Route::Contiguous`]: `Q` and `R` as coordinates in the rank-two module
//!   of contiguous ₂φ₁'s, obtained by walking 2×2 rational step matrices. Valid
//!   at any point off the poles; see [`contiguous`].

pub mod contiguous;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{phi21, phi21_sum, qpoch_finite, qpoch_infinite, BasePoint, SeriesControl};
use crate::real::QReal;

/// Integer shifts `(k, l, m, n)` of `(a, b, c, x)` in powers of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct ShiftVector {
    pub k: i64,
    pub l: i64,
    pub m: i64,
    pub n: i64,
}

impl ShiftVector {
    pub const ZERO: ShiftVector = ShiftVector { k: 0, l: 0, m: 0, n: 0 };
    /// The shift of the `φ(aq, bq; cq; q, x)` basis element.
    pub const UNIT: ShiftVector = ShiftVector { k: 1, l: 1, m: 1, n: 0 };

    pub const fn new(k: i64, l: i64, m: i64, n: i64) -> Self {
        ShiftVector { k, l, m, n }
    }

    pub fn to_array(self) -> [i64; 4] {
        [self.k, self.l, self.m, self.n]
    }

    /// Every shift in `[-r, r]^4`, lexicographic.
    pub fn cube(r: i64) -> Vec<ShiftVector> {
        let span = -r..=r;
        let mut out = Vec::new();
        for k in span.clone() {
            for l in span.clone() {
                for m in span.clone() {
                    for n in span.clone() {
                        out.push(ShiftVector::new(k, l, m, n));
                    }
                }
            }
        }
        out
    }

    /// Shifts exercising negative indices, `m != 0` signs and the `q^{m(m-1)/2}` factor.
    pub fn default_suite() -> Vec<ShiftVector> {
        vec![
            ShiftVector::new(0, 0, 1, 1),
            ShiftVector::new(2, 1, 1, 0),
            ShiftVector::new(1, -1, 0, 2),
            ShiftVector::new(-2, 2, -1, 1),
        ]
    }
}

impl From<[i64; 4]> for ShiftVector {
    fn from(v: [i64; 4]) -> Self {
        ShiftVector::new(v[0], v[1], v[2], v[3])
    }
}

impl From<ShiftVector> for [i64; 4] {
    fn from(s: ShiftVector) -> Self {
        s.to_array()
    }
}

impl std::ops::Neg for ShiftVector {
    type Output = ShiftVector;
    fn neg(self) -> ShiftVector {
        ShiftVector::new(-self.k, -self.l, -self.m, -self.n)
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.l, self.m, self.n)
    }
}

impl FromStr for ShiftVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<_> = t.split(',').map(|p| p.trim().parse::<i64>()).collect();
        match parts.as_slice() {
            [Ok(k), Ok(l), Ok(m), Ok(n)] => Ok(ShiftVector::new(*k, *l, *m, *n)),
            _ => Err(Error::Parse(format!("expected four comma-separated integers, got {s:?}"))),
        }
    }
}

/// `γ` with `c = q^γ`.
#[derive(Clone, Debug)]
pub struct GammaExponent {
    pub gamma: QReal,
}

impl GammaExponent {
    pub fn of(c: &QReal, q: &QReal) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Domain(format!("γ = log c / log q needs c > 0, got {c}")));
        }
        Ok(GammaExponent { gamma: c.ln() / q.ln() })
    }
}

/// Coefficients of the three-term relation at one shift and point.
#[derive(Clone, Debug)]
pub struct CoeffResult {
    pub q: QReal,
    pub r: QReal,
    /// Relative residual of the relation, see [`relation_residual`].
    pub residual: QReal,
    pub terms_used: usize,
}

fn nonzero(v: QReal, what: &str) -> Result<QReal> {
    if v.abs() < v.precision().pole_margin() {
        return Err(Error::Pole(format!("{what} vanishes")));
    }
    Ok(v)
}

fn pinf(z: &QReal, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    qpoch_infinite(z, &p.q, ctrl)
}

/// `y₁ = (q)_∞ (c)_∞ / ((a)_∞ (b)_∞) · ₂φ₁(a, b; c; q, x)`.
pub fn y1(p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let den = nonzero(pinf(&p.a, p, ctrl)? * pinf(&p.b, p, ctrl)?, "(a)_∞(b)_∞ in y₁")?;
    let pre = pinf(&p.q, p, ctrl)? * pinf(&p.c, p, ctrl)? / den;
    Ok(pre * phi21(&p.a, &p.b, &p.c, &p.x, &p.q, ctrl)?)
}

/// `y₂ = (q)_∞ (q²/c)_∞ / ((aq/c)_∞ (bq/c)_∞) · x^{1-γ} · ₂φ₁(aq/c, bq/c; q²/c; q, x)`.
pub fn y2(p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    if !p.x.is_positive() {
        return Err(Error::Domain(format!("y₂ needs x > 0 for x^(1-γ), got {}", p.x)));
    }
    let q = &p.q;
    let gamma = GammaExponent::of(&p.c, q)?.gamma;
    let aqc = &p.a * q / &p.c;
    let bqc = &p.b * q / &p.c;
    let q2c = q * q / &p.c;
    let den = nonzero(pinf(&aqc, p, ctrl)? * pinf(&bqc, p, ctrl)?, "(aq/c)_∞(bq/c)_∞ in y₂")?;
    let pre = pinf(q, p, ctrl)? * pinf(&q2c, p, ctrl)? / den;
    let power = p.x.powf(&(q.precision().one() - gamma));
    Ok(pre * power * phi21(&aqc, &bqc, &q2c, &p.x, q, ctrl)?)
}

/// `Y(k,l,m,n) = y₁(shifted) y₂(p) - y₂(shifted) y₁(p)`.
pub fn wronskian(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let ps = p.shifted(s);
    Ok(y1(&ps, ctrl)? * y2(p, ctrl)? - y2(&ps, ctrl)? * y1(p, ctrl)?)
}

/// Closed form of `Y(1,1,1,0)`:
/// `-(q)²_∞ (c)_∞ (q/c)_∞ (abxq/c)_∞ x^{-γ} / ((a)_∞ (b)_∞ (aq/c)_∞ (bq/c)_∞ (x)_∞)`.
pub fn y_unit_closed(p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    if !p.x.is_positive() {
        return Err(Error::Domain(format!("x^(-γ) needs x > 0, got {}", p.x)));
    }
    let BasePoint { a, b, c, x, q } = p;
    let gamma = GammaExponent::of(c, q)?.gamma;
    let pq = pinf(q, p, ctrl)?;
    let num = &pq * &pq * pinf(c, p, ctrl)? * pinf(&(q / c), p, ctrl)? * pinf(&(a * b * x * q / c), p, ctrl)?;
    let den = pinf(a, p, ctrl)?
        * pinf(b, p, ctrl)?
        * pinf(&(a * q / c), p, ctrl)?
        * pinf(&(b * q / c), p, ctrl)?
        * pinf(x, p, ctrl)?;
    let den = nonzero(den, "denominator of the closed form of Y(1,1,1,0)")?;
    Ok(-(num * x.powf(&(-gamma)) / den))
}

/// `(cq)_{m-1} / ((aq)_{k-1} (bq)_{l-1})`.
fn pochhammer_ratio(s: &ShiftVector, p: &BasePoint) -> Result<QReal> {
    let q = &p.q;
    let den = qpoch_finite(&(&p.a * q), s.k - 1, q)? * qpoch_finite(&(&p.b * q), s.l - 1, q)?;
    let den = nonzero(den, "(aq)_{k-1}(bq)_{l-1}")?;
    Ok(qpoch_finite(&(&p.c * q), s.m - 1, q)? / den)
}

/// `Q = (cq)_{m-1} / ((aq)_{k-1}(bq)_{l-1}) · Y(k,l,m,n) / Y(1,1,1,0)` with the
/// denominator taken from [`y_unit_closed`].
pub fn q_coeff(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let y = wronskian(s, p, ctrl)?;
    if y.is_zero() {
        return Ok(y);
    }
    let unit = nonzero(y_unit_closed(p, ctrl)?, "Y(1,1,1,0)")?;
    Ok(pochhammer_ratio(s, p)? * y / unit)
}

/// `(k-1, l-1, m-1, n; aq, bq, cq; x)`: the arguments at which `Q` relates to `R`.
pub fn bridge_point(s: &ShiftVector, p: &BasePoint) -> (ShiftVector, BasePoint) {
    let q = &p.q;
    (
        ShiftVector::new(s.k - 1, s.l - 1, s.m - 1, s.n),
        BasePoint { a: &p.a * q, b: &p.b * q, c: &p.c * q, x: p.x.clone(), q: q.clone() },
    )
}

/// Multiplier `C` in `R(s, p) = C · Q(k-1, l-1, m-1, n; aq, bq, cq; x)`:
/// `(1-c)(1-cq) / ((1-aq)(1-bq) x (c - abxq))`.
pub fn bridge_factor(p: &BasePoint) -> Result<QReal> {
    let BasePoint { a, b, c, x, q } = p;
    let one = q.precision().one();
    let den = (&one - &(a * q)) * (&one - &(b * q)) * x * (c - &(a * b * x * q));
    let den = nonzero(den, "(1-aq)(1-bq)x(c-abxq)")?;
    Ok((&one - c) * (&one - &(c * q)) / den)
}

/// `R` through the bridge to `Q` at the raised parameters.
pub fn r_coeff(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let factor = bridge_factor(p)?;
    let (s1, p1) = bridge_point(s, p);
    Ok(factor * q_coeff(&s1, &p1, ctrl)?)
}

/// The three ₂φ₁ values of the relation: shifted, unit-raised, base.
pub fn relation_series(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<([QReal; 3], usize)> {
    let q = &p.q;
    let ps = p.shifted(s);
    let up = p.shifted(&ShiftVector::UNIT);
    let f_s = phi21_sum(&ps.a, &ps.b, &ps.c, &ps.x, q, ctrl)?;
    let f_up = phi21_sum(&up.a, &up.b, &up.c, &p.x, q, ctrl)?;
    let f_0 = phi21_sum(&p.a, &p.b, &p.c, &p.x, q, ctrl)?;
    let terms = f_s.terms_used + f_up.terms_used + f_0.terms_used;
    Ok(([f_s.value, f_up.value, f_0.value], terms))
}

/// `R` recovered directly from the relation as `(φ_shifted - Q φ_up) / φ_base`.
pub fn r_recovered(s: &ShiftVector, p: &BasePoint, qv: &QReal, ctrl: &SeriesControl) -> Result<QReal> {
    let ([f_s, f_up, f_0], _) = relation_series(s, p, ctrl)?;
    let f_0 = nonzero(f_0, "φ(a,b;c;x)")?;
    Ok((f_s - qv * &f_up) / f_0)
}

/// `|φ_shifted - Q φ_up - R φ_base| / max(|φ_shifted|, |φ_up|, |φ_base|)` for given `Q`, `R`.
pub fn residual_of(s: &ShiftVector, p: &BasePoint, qv: &QReal, rv: &QReal, ctrl: &SeriesControl) -> Result<(QReal, usize)> {
    let ([f_s, f_up, f_0], terms) = relation_series(s, p, ctrl)?;
    let scale = f_s.abs().max(&f_up.abs()).max(&f_0.abs());
    let diff = (&f_s - &(qv * &f_up) - rv * &f_0).abs();
    Ok((diff / scale, terms))
}

/// Series-route `Q`, `R` and the relative residual of the relation they give.
pub fn relation_residual(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<CoeffResult> {
    let qv = q_coeff(s, p, ctrl)?;
    let rv = r_coeff(s, p, ctrl)?;
    let (residual, terms_used) = residual_of(s, p, &qv, &rv, ctrl)?;
    Ok(CoeffResult { q: qv, r: rv, residual, terms_used })
}

/// `σ₂(k,l,m,n; a,b,c,x) = (-k,-l,-m,k+l-m+n; q/a, q/b, q²/c, abx/c)`.
fn sigma2_image(s: &ShiftVector, p: &BasePoint) -> (ShiftVector, BasePoint) {
    let BasePoint { a, b, c, x, q } = p;
    (
        ShiftVector::new(-s.k, -s.l, -s.m, s.k + s.l - s.m + s.n),
        BasePoint { a: q / a, b: q / b, c: &(q * q) / c, x: a * b * x / c, q: q.clone() },
    )
}

/// The factor `λ` with `Y(σ₂-image) = -λ · Y(k,l,m,n; a,b,c; x)`.
pub fn lambda_factor(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let BasePoint { a, b, c, x, q } = p;
    let one = q.precision().one();
    let qp = |e: i64| q.powi(e);
    let z = a * b * x / c;
    let xqn = x * &qp(s.n);
    if !(xqn.is_positive() && z.is_positive()) {
        return Err(Error::Domain("λ needs x q^n > 0 and abx/c > 0".into()));
    }
    let gamma = GammaExponent::of(c, q)?.gamma;
    let num = pinf(&(a * &qp(s.k - s.m + 1) / c), p, ctrl)?
        * pinf(&(b * &qp(s.l - s.m + 1) / c), p, ctrl)?
        * pinf(&xqn, p, ctrl)?
        * pinf(a, p, ctrl)?
        * pinf(b, p, ctrl)?
        * pinf(x, p, ctrl)?;
    let den = pinf(&(qp(1 - s.k) / a), p, ctrl)?
        * pinf(&(qp(1 - s.l) / b), p, ctrl)?
        * pinf(&(&z * &qp(s.k + s.l - s.m + s.n)), p, ctrl)?
        * pinf(&(c / a), p, ctrl)?
        * pinf(&(c / b), p, ctrl)?
        * pinf(&z, p, ctrl)?;
    let den = nonzero(den, "denominator of λ")?;
    let pow1 = xqn.powf(&(&gamma + &(q.precision().int(s.m) - &one)));
    let pow2 = z.powf(&(&gamma - &one));
    Ok(num / den * pow1 * pow2)
}

/// Relative residual of `Y(σ₂-image) = -λ Y`.
pub fn lambda_identity_residual(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let (s2, p2) = sigma2_image(s, p);
    let lhs = wronskian(&s2, &p2, ctrl)?;
    let rhs = -(lambda_factor(s, p, ctrl)? * wronskian(s, p, ctrl)?);
    Ok(crate::real::rel_diff(&lhs, &rhs, &p.precision().pole_margin()))
}

/// Relative residual of `Y(-k,-l,-m,-n; shifted point) = -Y(k,l,m,n; p)`.
pub fn antisymmetry_residual(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    let lhs = wronskian(&-*s, &p.shifted(s), ctrl)?;
    let rhs = -wronskian(s, p, ctrl)?;
    Ok(crate::real::rel_diff(&lhs, &rhs, &p.precision().pole_margin()))
}

/// Relative residuals of the two identities that swap `y₁` and `y₂` under the
/// substitution `(q^{1-k}/a, q^{1-l}/b; q^{2-m}/c; abxq^{k+l-m+n}/c)`.
pub fn y_swap_residuals(s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<(QReal, QReal)> {
    let BasePoint { a, b, c, q, .. } = p;
    let prec = q.precision();
    let qp = |e: i64| q.powi(e);
    let shifted = p.shifted(s);
    let (s2, p2) = sigma2_image(s, p);
    let swapped = p2.shifted(&s2);
    let gamma = GammaExponent::of(c, q)?.gamma;
    let expo = &gamma + &prec.int(s.m - 1);
    let xqn = &shifted.x;
    let zs = &swapped.x;

    let lhs1 = y1(&swapped, ctrl)?;
    let num1 = pinf(&(a * &qp(s.k - s.m + 1) / c), p, ctrl)?
        * pinf(&(b * &qp(s.l - s.m + 1) / c), p, ctrl)?
        * pinf(xqn, p, ctrl)?;
    let den1 = pinf(&swapped.a, p, ctrl)? * pinf(&swapped.b, p, ctrl)? * pinf(zs, p, ctrl)?;
    let rhs1 = num1 / nonzero(den1, "y₁ swap denominator")? * xqn.powf(&expo) * y2(&shifted, ctrl)?;

    let lhs2 = y2(&swapped, ctrl)?;
    let num2 = pinf(&shifted.a, p, ctrl)? * pinf(&shifted.b, p, ctrl)? * pinf(xqn, p, ctrl)?;
    let den2 = pinf(&(c * &qp(s.m - s.k) / a), p, ctrl)?
        * pinf(&(c * &qp(s.m - s.l) / b), p, ctrl)?
        * pinf(zs, p, ctrl)?;
    let rhs2 = num2 / nonzero(den2, "y₂ swap denominator")? * zs.powf(&expo) * y1(&shifted, ctrl)?;

    let floor = prec.pole_margin();
    Ok((crate::real::rel_diff(&lhs1, &rhs1, &floor), crate::real::rel_diff(&lhs2, &rhs2, &floor)))
}

/// How `Q` and `R` are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Wronskian ratio of series solutions; `R` through the bridge.
    #[default]
    Series,
    /// Rational contiguity walk, valid outside the series convergence domain.
    Contiguous,
}

impl Route {
    pub fn q(self, s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
        match self {
            Route::Series => q_coeff(s, p, ctrl),
            Route::Contiguous => Ok(contiguous::coefficients(s, p)?.q),
        }
    }

    pub fn r(self, s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
        match self {
            Route::Series => r_coeff(s, p, ctrl),
            Route::Contiguous => Ok(contiguous::coefficients(s, p)?.r),
        }
    }

    /// `R` computed without going through the `Q`–`R` bridge.
    pub fn r_unbridged(self, s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
        match self {
            Route::Series => {
                let qv = q_coeff(s, p, ctrl)?;
                r_recovered(s, p, &qv, ctrl)
            }
            Route::Contiguous => Ok(contiguous::coefficients(s, p)?.r),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Series => "series",
            Route::Contiguous => "contiguous",
        })
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "series" => Ok(Route::Series),
            "contiguous" => Ok(Route::Contiguous),
            _ => Err(Error::Parse(format!("unknown route {s:?} (series|contiguous)"))),
        }
    }
}
