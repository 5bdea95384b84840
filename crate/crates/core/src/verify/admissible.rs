//! Seeded search for sample points where every check is well conditioned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{chain_slack, Which};
use crate::coeff::{contiguous, ShiftVector};
use crate::error::{Error, Result};
use crate::group::{conjugated_group, full_group, Group};
use crate::qseries::BasePoint;
use crate::real::{Precision, QReal};

/// What an admissible point must support.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibleKind {
    /// Every series evaluated on the Wronskian route converges with room to spare.
    Series,
    /// Every prefactor along both 96-orbits and every contiguity walk stays away from poles.
    #[default]
    Orbit,
}

/// Open sampling intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub q: (f64, f64),
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub c: (f64, f64),
    pub x: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { q: (0.1, 0.5), a: (0.2, 0.9), b: (0.2, 0.9), c: (0.2, 0.9), x: (0.2, 0.9) }
    }
}

impl SampleBox {
    /// Keeps `xq^n` inside the unit disc for `n ≥ -3` while `Q`, `R` over `[-3,3]^4`
    /// stay below about `1e7`; smaller `q` and `x` push them past `1e10`, where the
    /// relation residual in double mode is dominated by rounding in `Q φ_up + R φ`.
    pub fn sweep() -> Self {
        SampleBox { q: (0.6, 0.8), x: (0.05, 0.2), ..SampleBox::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    pub kind: AdmissibleKind,
    pub margin: f64,
    pub shifts: Vec<ShiftVector>,
    pub sample_box: SampleBox,
    pub max_attempts: usize,
    /// Series kind only: also require convergence at the σ₂ image of each shift.
    pub sigma2_image: bool,
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints {
            kind: AdmissibleKind::Orbit,
            margin: 1e-3,
            shifts: ShiftVector::default_suite(),
            sample_box: SampleBox::default(),
            max_attempts: 2_000,
            sigma2_image: false,
        }
    }
}

impl Constraints {
    pub fn series(shifts: Vec<ShiftVector>, sample_box: SampleBox) -> Self {
        Constraints { kind: AdmissibleKind::Series, shifts, sample_box, ..Constraints::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return Err(Error::Config(format!("margin must lie in (0, 0.5), got {}", self.margin)));
        }
        if self.shifts.is_empty() {
            return Err(Error::Config("constraints need at least one shift".into()));
        }
        let b = &self.sample_box;
        for (name, (lo, hi)) in [("q", b.q), ("a", b.a), ("b", b.b), ("c", b.c), ("x", b.x)] {
            if !(lo > 0.0 && lo < hi && hi < 1.0) {
                return Err(Error::Config(format!("sampling interval for {name} must satisfy 0 < lo < hi < 1")));
            }
        }
        Ok(())
    }
}

/// A sample point together with the smallest slack found over its checks.
#[derive(Clone, Debug)]
pub struct AdmissiblePoint {
    pub point: BasePoint,
    pub orbit_margin: QReal,
    pub kind: AdmissibleKind,
    pub attempts: usize,
}

/// Distance from `v` to the nearest integer.
fn int_distance(v: f64) -> f64 {
    (v - v.round()).abs()
}

/// `a, b, c, x` as powers of `q` must avoid integer (and integer-combination) exponents.
fn genericity_slack(p: &BasePoint) -> f64 {
    let [a, b, c, x, q] = p.to_f64s();
    let lq = q.ln();
    let e = [a.ln() / lq, b.ln() / lq, c.ln() / lq, x.ln() / lq];
    let mut worst = f64::INFINITY;
    // base-3 digits give coefficients in {-1, 0, 1}; code 40 is the zero combination
    for code in (0..81u32).filter(|&c| c != 40) {
        let mut t = code;
        let mut v = 0.0;
        for ei in e {
            let coef = (t % 3) as f64 - 1.0;
            t /= 3;
            v += coef * ei;
        }
        worst = worst.min(int_distance(v));
    }
    worst
}

/// Smallest slack of `p` under `cons`, or the reason it is rejected.
pub fn admissibility_slack(p: &BasePoint, cons: &Constraints) -> Result<f64> {
    cons.validate()?;
    slack_with(p, cons, &full_group(), &conjugated_group())
}

fn slack_with(p: &BasePoint, cons: &Constraints, qgroup: &Group, rgroup: &Group) -> Result<f64> {
    let [a, b, _, _, q] = p.to_f64s();
    if a <= q || b <= q {
        return Err(Error::Domain("a and b must exceed q".into()));
    }
    let generic = genericity_slack(p);
    if generic <= cons.margin {
        return Err(Error::Domain(format!("exponents lie within {generic:.2e} of a degenerate integer relation")));
    }
    let slack = match cons.kind {
        AdmissibleKind::Series => series_slack(p, cons),
        AdmissibleKind::Orbit => orbit_slack(p, cons, qgroup, rgroup)?,
    };
    let slack = slack.min(generic);
    if slack <= cons.margin {
        return Err(Error::Domain(format!("slack {slack:.2e} is below the margin {}", cons.margin)));
    }
    Ok(slack)
}

fn series_slack(p: &BasePoint, cons: &Constraints) -> f64 {
    let [a, b, c, x, q] = p.to_f64s();
    let mut worst = f64::INFINITY;
    let mut need = |v: f64| worst = worst.min(1.0 - v.abs());
    need(x);
    for s in &cons.shifts {
        need(x * q.powi(s.n as i32));
        if cons.sigma2_image {
            need(a * b * x / c * q.powi((s.k + s.l - s.m + s.n) as i32));
        }
    }
    worst
}

fn orbit_slack(p: &BasePoint, cons: &Constraints, qgroup: &Group, rgroup: &Group) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for s in &cons.shifts {
        for (which, group) in [(Which::Q, qgroup), (Which::R, rgroup)] {
            for el in &group.elements {
                let (slack, img_s, img_p) = chain_slack(which, &el.word, s, p)?;
                worst = worst.min(slack);
                worst = worst.min(contiguous::coefficients(&img_s, &img_p)?.slack);
            }
        }
        worst = worst.min(contiguous::coefficients(s, p)?.slack);
    }
    Ok(worst)
}

fn sample(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> String {
    format!("{:.4}", rng.gen_range(lo..hi))
}

/// Deterministic search: the same seed and constraints always return the same point.
///
/// Candidates are drawn with four decimals, so the point is exact at any precision.
pub fn find_admissible(seed: u64, cons: &Constraints, prec: Precision) -> Result<AdmissiblePoint> {
    cons.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // screening at double precision is enough for a 1e-3 margin
    let screen = Precision::DOUBLE;
    let (qgroup, rgroup) = (full_group(), conjugated_group());
    for attempt in 1..=cons.max_attempts {
        let bx = &cons.sample_box;
        let q = sample(&mut rng, bx.q);
        let a = sample(&mut rng, bx.a);
        let b = sample(&mut rng, bx.b);
        let c = sample(&mut rng, bx.c);
        let x = sample(&mut rng, bx.x);
        let Ok(cand) = BasePoint::parse(screen, &a, &b, &c, &x, &q) else {
            continue;
        };
        if let Ok(margin) = slack_with(&cand, cons, &qgroup, &rgroup) {
            let point = BasePoint::parse(prec, &a, &b, &c, &x, &q)?;
            return Ok(AdmissiblePoint { point, orbit_margin: prec.real(margin), kind: cons.kind, attempts: attempt });
        }
    }
    Err(Error::SearchExhausted { attempts: cons.max_attempts })
}

/// `count` distinct admissible points from consecutive seeds starting at `seed`.
pub fn find_admissible_many(seed: u64, count: usize, cons: &Constraints, prec: Precision) -> Result<Vec<AdmissiblePoint>> {
    let mut out: Vec<AdmissiblePoint> = Vec::with_capacity(count);
    let mut s = seed;
    while out.len() < count {
        let hit = find_admissible(s, cons, prec)?;
        if !out.iter().any(|o| o.point.to_f64s() == hit.point.to_f64s()) {
            out.push(hit);
        }
        s = s.wrapping_add(1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(a: &str, b: &str, c: &str, x: &str, q: &str) -> BasePoint {
        BasePoint::parse(Precision::DOUBLE, a, b, c, x, q).unwrap()
    }

    #[test]
    fn gamma_one_rejected() {
        let p = parse("0.6", "0.7", "0.3", "0.4", "0.3");
        assert!(admissibility_slack(&p, &Constraints::default()).is_err());
    }

    #[test]
    fn a_equals_c_rejected() {
        let p = parse("0.55", "0.7", "0.55", "0.4", "0.3");
        assert!(admissibility_slack(&p, &Constraints::default()).is_err());
    }

    #[test]
    fn a_below_q_rejected() {
        let p = parse("0.25", "0.7", "0.55", "0.4", "0.3");
        assert!(admissibility_slack(&p, &Constraints::default()).is_err());
    }

    #[test]
    fn series_kind_needs_convergence() {
        let cons = Constraints::series(vec![ShiftVector::new(0, 0, 0, -1)], SampleBox::default());
        let p = parse("0.6", "0.7", "0.55", "0.4", "0.3");
        assert!(admissibility_slack(&p, &cons).is_err());
        let cons = Constraints::series(vec![ShiftVector::new(0, 0, 0, 1)], SampleBox::default());
        assert!(admissibility_slack(&p, &cons).is_ok());
    }

    #[test]
    fn search_is_deterministic() {
        let cons = Constraints::series(ShiftVector::default_suite(), SampleBox::default());
        let p1 = find_admissible(7, &cons, Precision::DOUBLE).unwrap();
        let p2 = find_admissible(7, &cons, Precision::DOUBLE).unwrap();
        assert_eq!(p1.point.to_f64s(), p2.point.to_f64s());
        assert_eq!(p1.attempts, p2.attempts);
    }

    #[test]
    fn bad_constraints() {
        let mut cons = Constraints::default();
        cons.margin = 0.0;
        assert!(matches!(find_admissible(1, &cons, Precision::DOUBLE), Err(Error::Config(_))));
        let mut cons = Constraints::default();
        cons.sample_box.q = (0.5, 0.1);
        assert!(cons.validate().is_err());
    }

    #[test]
    fn exhausted() {
        let cons = Constraints { max_attempts: 1, margin: 0.49, ..Constraints::default() };
        assert!(matches!(find_admissible(3, &cons, Precision::DOUBLE), Err(Error::SearchExhausted { attempts: 1 })));
    }
}
