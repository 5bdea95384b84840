//! `Q` and `R` from contiguity step matrices.
//!
//! Write `v(P) = (φ_P(x), φ_P(qx))` for the series with parameters `P`. The
//! ₂φ₁ q-difference equation
//!
//! ```text
//! (c/q - abx) φ(q²x) = (1 + c/q - (a+b)x) φ(qx) - (1 - x) φ(x)
//! ```
//!
//! together with
//!
//! ```text
//! φ(aq, b; c; x)   = φ + a/(1-a)     · (φ(x) - φ(qx))
//! φ(a, b; c/q; x)  = φ + (c/q)/(1-c/q) · (φ(x) - φ(qx))
//! ```
//!
//! gives, for each unit move of `a`, `b`, `c` or `x`, a 2×2 matrix `M` with
//! `v(P + step) = M(P) v(P)`. Walking from `(a, b, c, x)` to
//! `(aq^k, bq^l, cq^m, xq^n)` yields the first row `(r₀, r₁)` of the
//! accumulated matrix, so `φ_shifted = r₀ φ(x) + r₁ φ(qx)`. Since
//! `φ(aq, bq; cq; x) = (1-c)/(x(1-a)(1-b)) · (φ(x) - φ(qx))`, matching
//! coefficients gives
//!
//! ```text
//! Q = -r₁ x (1-a)(1-b) / (1-c),    R = r₀ + r₁.
//! ```
//!
//! Everything is rational in the parameters, so no series is summed and no
//! convergence condition applies.

use crate::coeff::ShiftVector;
use crate::error::{Error, Result};
use crate::qseries::BasePoint;
use crate::real::QReal;

#[derive(Clone, Debug)]
struct Mat2([[QReal; 2]; 2]);

impl Mat2 {
    fn identity(one: &QReal) -> Self {
        let zero = one - one;
        Mat2([[one.clone(), zero.clone()], [zero, one.clone()]])
    }

    fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Result of a contiguity walk.
#[derive(Clone, Debug)]
pub struct ContiguousCoefficients {
    pub q: QReal,
    pub r: QReal,
    /// Smallest normalised denominator met along the walk; small values mean a nearby pole.
    pub slack: f64,
}

struct Walker {
    a: QReal,
    b: QReal,
    c: QReal,
    x: QReal,
    q: QReal,
    one: QReal,
    margin: QReal,
    acc: Mat2,
    slack: f64,
}

#[derive(Clone, Copy)]
enum Step {
    RaiseA,
    RaiseB,
    LowerC,
    RaiseX,
}

impl Walker {
    fn guard(&mut self, den: &QReal, scale: &QReal, what: &str) -> Result<()> {
        let mag = den.abs();
        if mag < self.margin {
            return Err(Error::Pole(format!("{what} vanishes in the contiguity walk")));
        }
        let rel = if scale.is_zero() { mag.to_f64() } else { (mag / scale).to_f64() };
        self.slack = self.slack.min(rel);
        Ok(())
    }

    /// `(A, B)` with `φ(q²x) = A φ(x) + B φ(qx)` at parameters `(a, b, c, x)`.
    fn difference_eq(&mut self, a: &QReal, b: &QReal, c: &QReal, x: &QReal) -> Result<(QReal, QReal)> {
        let cq = c / &self.q;
        let abx = a * b * x;
        let d = &cq - &abx;
        let scale = cq.abs() + abx.abs();
        self.guard(&d, &scale, "c/q - abx")?;
        let one = &self.one;
        let ca = -((one - x) / &d);
        let cb = (one + &cq - &((a + b) * x)) / &d;
        Ok((ca, cb))
    }

    /// Matrix of `step` taken from parameters `(a, b, c, x)`.
    fn step_matrix(&mut self, step: Step, a: &QReal, b: &QReal, c: &QReal, x: &QReal) -> Result<Mat2> {
        let (ca, cb) = self.difference_eq(a, b, c, x)?;
        let one = self.one.clone();
        let zero = &one - &one;
        if let Step::RaiseX = step {
            return Ok(Mat2([[zero, one], [ca, cb]]));
        }
        let z = match step {
            Step::RaiseA => a.clone(),
            Step::RaiseB => b.clone(),
            Step::LowerC => c / &self.q,
            Step::RaiseX => unreachable!(),
        };
        let den = &one - &z;
        let scale = one.clone() + z.abs();
        self.guard(&den, &scale, "1 - z in a raising step")?;
        let f = z / den;
        Ok(Mat2([
            [&one + &f, -f.clone()],
            [-(&f * &ca), &(&one + &f) - &(&f * &cb)],
        ]))
    }

    fn forward(&mut self, step: Step) -> Result<()> {
        let (a, b, c, x) = (self.a.clone(), self.b.clone(), self.c.clone(), self.x.clone());
        let m = self.step_matrix(step, &a, &b, &c, &x)?;
        self.acc = m.mul(&self.acc);
        match step {
            Step::RaiseA => self.a = &self.a * &self.q,
            Step::RaiseB => self.b = &self.b * &self.q,
            Step::LowerC => self.c = &self.c / &self.q,
            Step::RaiseX => self.x = &self.x * &self.q,
        }
        Ok(())
    }

    /// Undo `step`: move to the point `P'` with `P' + step = P` and apply `M(P')⁻¹`.
    fn backward(&mut self, step: Step) -> Result<()> {
        match step {
            Step::RaiseA => self.a = &self.a / &self.q,
            Step::RaiseB => self.b = &self.b / &self.q,
            Step::LowerC => self.c = &self.c * &self.q,
            Step::RaiseX => self.x = &self.x / &self.q,
        }
        let (a, b, c, x) = (self.a.clone(), self.b.clone(), self.c.clone(), self.x.clone());
        let m = self.step_matrix(step, &a, &b, &c, &x)?;
        let [[m00, m01], [m10, m11]] = m.0;
        let p1 = &m00 * &m11;
        let p2 = &m01 * &m10;
        let det = &p1 - &p2;
        let scale = p1.abs() + p2.abs();
        self.guard(&det, &scale, "step-matrix determinant")?;
        let inv = Mat2([[&m11 / &det, -(&m01 / &det)], [-(&m10 / &det), &m00 / &det]]);
        self.acc = inv.mul(&self.acc);
        Ok(())
    }

    fn walk(&mut self, step: Step, count: i64) -> Result<()> {
        for _ in 0..count.unsigned_abs() {
            if count > 0 {
                self.forward(step)?;
            } else {
                self.backward(step)?;
            }
        }
        Ok(())
    }
}

/// `Q` and `R` of the three-term relation at `(s, p)` by contiguity walk.
///
/// Works for any nonzero real parameters, including points where the series
/// defining `Q` on the Wronskian route diverge.
pub fn coefficients(s: &ShiftVector, p: &BasePoint) -> Result<ContiguousCoefficients> {
    let prec = p.precision();
    let one = prec.one();
    let mut w = Walker {
        a: p.a.clone(),
        b: p.b.clone(),
        c: p.c.clone(),
        x: p.x.clone(),
        q: p.q.clone(),
        one: one.clone(),
        margin: prec.pole_margin(),
        acc: Mat2::identity(&one),
        slack: f64::INFINITY,
    };
    w.walk(Step::RaiseA, s.k)?;
    w.walk(Step::RaiseB, s.l)?;
    // c moves up by q^m, i.e. m reverse LowerC steps
    w.walk(Step::LowerC, -s.m)?;
    w.walk(Step::RaiseX, s.n)?;

    let [r0, r1] = w.acc.0[0].clone();
    let BasePoint { a, b, c, x, .. } = p;
    let basis_den = &one - c;
    let scale = one.clone() + c.abs();
    w.guard(&basis_den, &scale, "1 - c")?;
    let qv = -(&r1 * x * (&one - a) * (&one - b) / basis_den);
    let rv = &r0 + &r1;
    Ok(ContiguousCoefficients { q: qv, r: rv, slack: w.slack })
}
