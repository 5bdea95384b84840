//! Configurable-precision real scalar.
//!
//! [`QReal`] wraps an `astro_float::BigFloat` together with the working
//! [`Precision`] it was created at. Binary operations run at the larger of the
//! two operand precisions, so a computation seeded from a single `Precision`
//! stays at that precision throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 15;
    /// Fast smoke-test mode.
    pub const DOUBLE: Precision = Precision(16);
    pub const DEFAULT: Precision = Precision(50);

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Config(format!(
                "precision must be at least {} decimal digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// Mantissa bits requested from the backend (rounded up to whole words by astro-float).
    pub fn bits(self) -> usize {
        ((self.0 as f64 * LOG2_10).ceil() as usize).max(53)
    }

    pub fn is_double(self) -> bool {
        self.0 <= 16
    }

    pub fn zero(self) -> QReal {
        QReal::from_big(BigFloat::from_word(0, self.bits()), self)
    }

    pub fn one(self) -> QReal {
        QReal::from_big(BigFloat::from_word(1, self.bits()), self)
    }

    pub fn int(self, v: i64) -> QReal {
        let mag = BigFloat::from_word(v.unsigned_abs(), self.bits());
        QReal::from_big(if v < 0 { mag.neg() } else { mag }, self)
    }

    /// Exact binary value of `v` at this precision.
    pub fn real(self, v: f64) -> QReal {
        QReal::from_big(BigFloat::from_f64(v, self.bits()), self)
    }

    /// `10^exp`, correctly rounded.
    pub fn pow10(self, exp: i32) -> QReal {
        let ten = self.int(10);
        ten.powi(exp as i64)
    }

    /// Parse a decimal literal such as `"0.55"` or `"-1.5e-3"`.
    pub fn parse(self, s: &str) -> Result<QReal> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|ch| ch.is_ascii_digit() || matches!(ch, '.' | 'e' | 'E' | '+' | '-'))
            && t.chars().any(|ch| ch.is_ascii_digit());
        if !ok {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let mut cc = consts();
        let v = BigFloat::parse(t, Radix::Dec, self.bits(), RM, &mut cc);
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {s:?}")));
        }
        Ok(QReal::from_big(v, self))
    }

    /// Magnitude below which a factor counts as vanishing: `10^-(digits-5)`.
    pub fn pole_margin(self) -> QReal {
        self.pow10(-(self.0 as i32 - 5))
    }

    /// Default relative truncation tolerance for series and products.
    pub fn default_tol(self) -> QReal {
        self.pow10(-(self.0 as i32 + 2))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Precision::new(v)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.0
    }
}

fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache allocation")
}

/// Real number at a configurable working precision.
#[derive(Clone)]
pub struct QReal {
    v: BigFloat,
    prec: Precision,
}

impl QReal {
    fn from_big(v: BigFloat, prec: Precision) -> Self {
        QReal { v, prec }
    }

    fn wrap(&self, v: BigFloat) -> Self {
        QReal { v, prec: self.prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same value rounded to another working precision.
    pub fn with_precision(&self, prec: Precision) -> QReal {
        let mut v = self.v.clone();
        // only fails for NaN/inf, which never reach here
        let _ = v.set_precision(prec.bits(), RM);
        QReal { v, prec }
    }

    fn bits(&self, other: &QReal) -> (usize, Precision) {
        let p = self.prec.max(other.prec);
        (p.bits(), p)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn abs(&self) -> QReal {
        self.wrap(self.v.abs())
    }

    pub fn recip(&self) -> QReal {
        self.wrap(self.v.reciprocal(self.prec.bits(), RM))
    }

    pub fn ln(&self) -> QReal {
        let mut cc = consts();
        self.wrap(self.v.ln(self.prec.bits(), RM, &mut cc))
    }

    pub fn exp(&self) -> QReal {
        let mut cc = consts();
        self.wrap(self.v.exp(self.prec.bits(), RM, &mut cc))
    }

    /// Principal real power `self^e` for `self > 0`.
    pub fn powf(&self, e: &QReal) -> QReal {
        (e * &self.ln()).exp()
    }

    /// Integer power by repeated squaring; negative exponents take the reciprocal.
    pub fn powi(&self, e: i64) -> QReal {
        let p = self.prec.bits();
        let mut acc = BigFloat::from_word(1, p);
        let mut base = self.v.clone();
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, p, RM);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, p, RM);
            }
        }
        if e < 0 {
            acc = acc.reciprocal(p, RM);
        }
        self.wrap(acc)
    }

    pub fn max(&self, other: &QReal) -> QReal {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Nearest `f64` (magnitudes outside the f64 range saturate).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        let (words, _, sign, exp, _) = self.v.as_raw_parts().expect("finite value");
        let top = *words.last().expect("normalized mantissa") as f64;
        let next = if words.len() > 1 { words[words.len() - 2] as f64 } else { 0.0 };
        // value = 0.m * 2^exp with the top word holding the 64 leading bits
        let m = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
        let v = m * 2f64.powi(exp);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal scientific notation with `digits` significant digits, e.g. `6.1600e0`.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.v.is_zero() {
            return "0".to_string();
        }
        let mut cc = consts();
        let raw = self.v.format(Radix::Dec, RM, &mut cc).expect("decimal formatting");
        round_scientific(&raw, digits.max(1) as usize)
    }
}

/// Round a `[-]d.ddd…e±x` string to `digits` significant digits (round half up).
fn round_scientific(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // position of the decimal point relative to the digit string
    let mut point = int_part.len() as i64 + exp;
    let first_nz = all.iter().position(|&d| d != 0).unwrap_or(all.len());
    if first_nz == all.len() {
        return "0".to_string();
    }
    let sig = &all[first_nz..];
    point -= first_nz as i64;
    let mut kept: Vec<u8> = sig.iter().take(digits).copied().collect();
    kept.resize(digits, 0);
    if sig.len() > digits && sig[digits] >= 5 {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.truncate(digits);
                point += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + kept[0]) as char);
    if digits > 1 {
        out.push('.');
        out.extend(kept[1..].iter().map(|&d| (b'0' + d) as char));
    }
    out.push('e');
    out.push_str(&(point - 1).to_string());
    out
}

impl fmt::Debug for QReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.prec.digits()))
    }
}

impl fmt::Display for QReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.prec.digits()))
    }
}

impl PartialEq for QReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for QReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&QReal> for &QReal {
            type Output = QReal;
            fn $method(self, rhs: &QReal) -> QReal {
                let (bits, prec) = self.bits(rhs);
                QReal::from_big(self.v.$method(&rhs.v, bits, RM), prec)
            }
        }
        impl $tr<QReal> for QReal {
            type Output = QReal;
            fn $method(self, rhs: QReal) -> QReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QReal> for QReal {
            type Output = QReal;
            fn $method(self, rhs: &QReal) -> QReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<QReal> for &QReal {
            type Output = QReal;
            fn $method(self, rhs: QReal) -> QReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for QReal {
    type Output = QReal;
    fn neg(self) -> QReal {
        QReal { v: self.v.neg(), prec: self.prec }
    }
}

impl Neg for &QReal {
    type Output = QReal;
    fn neg(self) -> QReal {
        self.wrap(self.v.clone().neg())
    }
}

/// `|a - b| / max(|a|, |b|)`, with both-tiny pairs reported as 0.
pub fn rel_diff(a: &QReal, b: &QReal, zero_floor: &QReal) -> QReal {
    let scale = a.abs().max(&b.abs());
    if &scale < zero_floor {
        return a.precision().zero();
    }
    (a - b).abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_integers() {
        let p = Precision::DEFAULT;
        assert_eq!(p.int(-7).to_f64(), -7.0);
        assert_eq!(p.int(0), p.zero());
        assert_eq!(p.int(i64::MIN).to_f64(), i64::MIN as f64);
        assert_eq!(&p.int(3) + &p.int(-3), p.zero());
    }

    #[test]
    fn parse_and_print() {
        let p = Precision::DEFAULT;
        let x = p.parse("0.55").unwrap();
        assert_eq!(x.to_decimal(5), "5.5000e-1");
        assert_eq!(p.parse("-12.5e2").unwrap().to_decimal(3), "-1.25e3");
        assert!(p.parse("abc").is_err());
        assert!(p.parse("").is_err());
    }

    #[test]
    fn rounding_carries() {
        assert_eq!(round_scientific("9.9996e-1", 4), "1.000e0");
        assert_eq!(round_scientific("1.23449e2", 4), "1.234e2");
        assert_eq!(round_scientific("1.23450e2", 4), "1.235e2");
        assert_eq!(round_scientific("0.00e0", 4), "0");
    }

    #[test]
    fn third_is_accurate_at_fifty_digits() {
        let p = Precision::DEFAULT;
        let third = p.one() / p.int(3);
        let back = &third * &p.int(3);
        assert!((back - p.one()).abs() < p.pow10(-55));
    }

    #[test]
    fn transcendental_round_trip() {
        let p = Precision::DEFAULT;
        let x = p.parse("0.3").unwrap();
        let y = x.ln().exp();
        assert!((&y - &x).abs() < p.pow10(-50));
        let two = p.int(2);
        let sq = x.powf(&two);
        assert!((sq - x.powi(2)).abs() < p.pow10(-50));
    }

    #[test]
    fn powi_negative() {
        let p = Precision::DOUBLE;
        let half = p.real(0.5);
        assert_eq!(half.powi(-3).to_f64(), 8.0);
        assert_eq!(half.powi(0).to_f64(), 1.0);
    }

    #[test]
    fn to_f64_matches() {
        let p = Precision::DEFAULT;
        for v in [0.3, -1.75, 1e-20, 12345.678, 0.0] {
            assert_eq!(p.real(v).to_f64(), v);
        }
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(14).is_err());
        assert_eq!(Precision::new(15).unwrap().bits(), 53);
        assert_eq!(Precision::DEFAULT.pole_margin().to_decimal(2), "1.0e-45");
    }
}
