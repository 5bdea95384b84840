//! Closed-form multipliers of the base symmetry formulas.

use crate::coeff::ShiftVector;
use crate::error::{Error, Result};
use crate::group::GeneratorId;
use crate::qseries::{qpoch_finite_tracked, BasePoint};
use crate::real::QReal;

/// Running product that records how close any factor came to zero.
struct Product<'a> {
    q: &'a QReal,
    num: QReal,
    den: QReal,
    margin: QReal,
    slack: f64,
}

impl<'a> Product<'a> {
    fn new(p: &'a BasePoint) -> Self {
        let prec = p.precision();
        Product { q: &p.q, num: prec.one(), den: prec.one(), margin: prec.pole_margin(), slack: f64::INFINITY }
    }

    fn poch(&mut self, z: &QReal, i: i64) -> Result<&mut Self> {
        let v = qpoch_finite_tracked(z, i, self.q, &mut self.slack)?;
        self.num = &self.num * &v;
        Ok(self)
    }

    fn poch_den(&mut self, z: &QReal, i: i64) -> Result<&mut Self> {
        let v = qpoch_finite_tracked(z, i, self.q, &mut self.slack)?;
        if v.abs() < self.margin {
            return Err(Error::Pole(format!("({z};q)_{i} vanishes in a prefactor denominator")));
        }
        self.den = &self.den * &v;
        Ok(self)
    }

    fn factor(&mut self, f: QReal) -> &mut Self {
        self.slack = self.slack.min(f.abs().to_f64());
        self.num = &self.num * &f;
        self
    }

    fn factor_den(&mut self, f: QReal) -> Result<&mut Self> {
        self.slack = self.slack.min(f.abs().to_f64());
        if f.abs() < self.margin {
            return Err(Error::Pole(format!("prefactor denominator factor {f} vanishes")));
        }
        self.den = &self.den * &f;
        Ok(self)
    }

    fn power(&mut self, base: &QReal, e: i64) -> &mut Self {
        self.num = &self.num * &base.powi(e);
        self
    }

    fn sign(&mut self, negative: bool) -> &mut Self {
        if negative {
            self.num = -self.num.clone();
        }
        self
    }

    fn finish(self) -> (QReal, f64) {
        (self.num / self.den, self.slack)
    }
}

fn odd(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

fn base_index(gen: GeneratorId) -> Result<usize> {
    match gen.sigma_index() {
        Some(i) if i < 4 => Ok(i),
        _ => Err(Error::Config(format!("{gen} has no base prefactor; use s0..s3"))),
    }
}

/// Multiplier `C` with `Q(s,p) = C · Q(σ(s,p))` for `σ ∈ {σ₀,…,σ₃}`, plus its slack.
pub fn prefactor_q_tracked(gen: GeneratorId, s: &ShiftVector, p: &BasePoint) -> Result<(QReal, f64)> {
    let ShiftVector { k, l, m, n } = *s;
    let BasePoint { a, b, c, x, q } = p;
    let one = p.precision().one();
    let mut t = Product::new(p);
    match base_index(gen)? {
        0 => {
            t.sign(odd(m + 1))
                .poch(c, m)?
                .poch(&(c * q), m)?
                .poch(&(a * q / c), k - m)?
                .poch(&(b * q / c), l - m)?
                .poch(x, n)?
                .power(x, -m)
                .power(q, -(m * (m - 1) / 2 + m * n))
                .power(c, -(m + n))
                .poch_den(&(a * q), k)?
                .poch_den(&(b * q), l)?
                .poch_den(&(a * b * x * q / c), k + l - m + n)?;
        }
        1 => {
            t.factor(&one - b)
                .factor(c - &(a * b * x))
                .factor_den(c - a)?
                .factor_den(c - b)?
                .poch(&(c * q), m - 1)?
                .poch(&(x * q), n - 1)?
                .poch_den(&(a * q), k - 1)?
                .poch_den(&(b * x * q), l + n - 1)?;
        }
        2 => {
            t.sign(odd(m + 1))
                .factor(&one - a)
                .factor(&one - b)
                .poch(&(c * q), m - 1)?
                .poch(&(c / &q.powi(2)), m + 1)?
                .poch(&(a * q / c), k - m)?
                .poch(&(b * q / c), l - m)?
                .poch(&(x * q), n - 1)?
                .power(x, -m)
                .power(q, -(m * (m - 1) / 2 + (m - 1) * (n - 1)))
                .power(c, -(m + n - 1))
                .poch_den(&(a / q), k + 1)?
                .poch_den(&(b / q), l + 1)?
                .poch_den(&(a * b * x * q / c), k + l - m + n - 1)?;
        }
        _ => {}
    }
    Ok(t.finish())
}

/// Multiplier `C` with `R(s,p) = C · R(τστ⁻¹(s,p))` for `σ ∈ {σ₀,…,σ₃}`, plus its slack.
pub fn prefactor_r_tracked(gen: GeneratorId, s: &ShiftVector, p: &BasePoint) -> Result<(QReal, f64)> {
    let ShiftVector { k, l, m, n } = *s;
    let BasePoint { a, b, c, x, q } = p;
    let mut t = Product::new(p);
    match base_index(gen)? {
        0 | 2 => {
            t.sign(odd(m))
                .poch(c, m - 1)?
                .poch(&(c * q), m - 1)?
                .poch(&(a * q / c), k - m)?
                .poch(&(b * q / c), l - m)?
                .poch(x, n)?
                .power(x, 1 - m)
                .power(q, -(m * (m - 1) / 2 + (m - 1) * (n - 1)))
                .power(c, -(m + n - 1))
                .poch_den(&(a * q), k - 1)?
                .poch_den(&(b * q), l - 1)?
                .poch_den(&(a * b * x * q / c), k + l - m + n - 1)?;
        }
        1 => {
            t.poch(c, m)?.poch(x, n)?.poch_den(&(a * q), k - 1)?.poch_den(&(b * x), l + n)?;
        }
        _ => {}
    }
    Ok(t.finish())
}

pub fn prefactor_q(gen: GeneratorId, s: &ShiftVector, p: &BasePoint) -> Result<QReal> {
    prefactor_q_tracked(gen, s, p).map(|(v, _)| v)
}

pub fn prefactor_r(gen: GeneratorId, s: &ShiftVector, p: &BasePoint) -> Result<QReal> {
    prefactor_r_tracked(gen, s, p).map(|(v, _)| v)
}
