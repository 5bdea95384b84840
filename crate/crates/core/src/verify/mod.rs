//! Numerical certification of the coefficient symmetries.
//!
//! Every identity is checked by computing both sides independently: the
//! coefficient at `(s, p)` on one side, a closed-form multiplier times the
//! coefficient at the transformed arguments on the other.

mod admissible;
mod prefactor;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use admissible::{
    admissibility_slack, find_admissible, find_admissible_many, AdmissibleKind, AdmissiblePoint, Constraints, SampleBox,
};
pub use prefactor::{prefactor_q, prefactor_q_tracked, prefactor_r, prefactor_r_tracked};

use crate::coeff::{bridge_factor, bridge_point, Route, ShiftVector};
use crate::error::{Error, Result};
use crate::group::{conjugated_generators, conjugated_group, full_group, generator, GeneratorId, Group, Transform};
use crate::qseries::{BasePoint, SeriesControl};
use crate::real::{rel_diff, Precision, QReal};

/// Which coefficient of the three-term relation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    #[default]
    Q,
    R,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Q => "Q",
            Which::R => "R",
        })
    }
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "q" => Ok(Which::Q),
            "R" | "r" => Ok(Which::R),
            _ => Err(Error::Parse(format!("expected Q or R, got '{s}'"))),
        }
    }
}

/// The base identities: four for `Q`, the bridge, four for `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    Q0,
    Q1,
    Q2,
    Q3,
    Bridge,
    R0,
    R1,
    R2,
    R3,
}

impl FormulaId {
    pub const ALL: [FormulaId; 9] = [
        FormulaId::Q0,
        FormulaId::Q1,
        FormulaId::Q2,
        FormulaId::Q3,
        FormulaId::Bridge,
        FormulaId::R0,
        FormulaId::R1,
        FormulaId::R2,
        FormulaId::R3,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FormulaId::Q0 => "1.2",
            FormulaId::Q1 => "1.3",
            FormulaId::Q2 => "1.4",
            FormulaId::Q3 => "1.5",
            FormulaId::Bridge => "1.6",
            FormulaId::R0 => "1.7",
            FormulaId::R1 => "1.8",
            FormulaId::R2 => "1.9",
            FormulaId::R3 => "1.10",
        }
    }

    /// The four symmetry formulas of a coefficient, in generator order.
    pub fn base(which: Which) -> [FormulaId; 4] {
        match which {
            Which::Q => [FormulaId::Q0, FormulaId::Q1, FormulaId::Q2, FormulaId::Q3],
            Which::R => [FormulaId::R0, FormulaId::R1, FormulaId::R2, FormulaId::R3],
        }
    }

    /// Coefficient and generator of a symmetry formula; `None` for the bridge.
    pub fn symmetry(self) -> Option<(Which, GeneratorId)> {
        let i = FormulaId::ALL.iter().position(|&f| f == self)?;
        match i {
            0..=3 => Some((Which::Q, GeneratorId::BASE[i])),
            5..=8 => Some((Which::R, GeneratorId::BASE[i - 5])),
            _ => None,
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        FormulaId::ALL
            .iter()
            .copied()
            .find(|f| f.label() == t)
            .ok_or_else(|| Error::Parse(format!("unknown formula '{s}'")))
    }
}

fn base_generator(which: Which, gen: GeneratorId) -> Result<Transform> {
    let i = match gen.sigma_index() {
        Some(i) if i < 4 => i,
        _ => return Err(Error::Config(format!("{gen} is not one of s0..s3"))),
    };
    Ok(match which {
        Which::Q => generator(gen),
        Which::R => conjugated_generators()[i],
    })
}

fn prefactor_tracked(which: Which, gen: GeneratorId, s: &ShiftVector, p: &BasePoint) -> Result<(QReal, f64)> {
    match which {
        Which::Q => prefactor_q_tracked(gen, s, p),
        Which::R => prefactor_r_tracked(gen, s, p),
    }
}

fn coefficient(which: Which, route: Route, s: &ShiftVector, p: &BasePoint, ctrl: &SeriesControl) -> Result<QReal> {
    match which {
        Which::Q => route.q(s, p, ctrl),
        Which::R => route.r(s, p, ctrl),
    }
}

/// Zero-zero aware relative difference at the point's precision.
pub fn identity_error(lhs: &QReal, rhs: &QReal) -> QReal {
    let prec = lhs.precision().max(rhs.precision());
    rel_diff(lhs, rhs, &prec.pole_margin())
}

/// Both sides of one identity and their relative difference.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub lhs: QReal,
    pub rhs: QReal,
    pub error: QReal,
}

impl IdentityCheck {
    fn new(lhs: QReal, rhs: QReal) -> Self {
        let error = identity_error(&lhs, &rhs);
        IdentityCheck { lhs, rhs, error }
    }
}

/// One base formula at `(s, p)`.
pub fn verify_base_symmetry(
    formula: FormulaId,
    s: &ShiftVector,
    p: &BasePoint,
    route: Route,
    ctrl: &SeriesControl,
) -> Result<IdentityCheck> {
    match formula.symmetry() {
        Some((which, gen)) => {
            let (img_s, img_p) = base_generator(which, gen)?.apply(s, p)?;
            let lhs = coefficient(which, route, s, p, ctrl)?;
            let (c, _) = prefactor_tracked(which, gen, s, p)?;
            let rhs = c * coefficient(which, route, &img_s, &img_p, ctrl)?;
            Ok(IdentityCheck::new(lhs, rhs))
        }
        None => {
            let lhs = route.r_unbridged(s, p, ctrl)?;
            let (bs, bp) = bridge_point(s, p);
            let rhs = bridge_factor(p)? * route.q(&bs, &bp, ctrl)?;
            Ok(IdentityCheck::new(lhs, rhs))
        }
    }
}

/// Accumulated prefactor along `word` (indices into `s0..s3`, applied in order),
/// with the image of `(s, p)` under the whole word.
pub fn chain_prefactor(
    which: Which,
    word: &[usize],
    s: &ShiftVector,
    p: &BasePoint,
) -> Result<(QReal, f64, ShiftVector, BasePoint)> {
    let mut acc = p.precision().one();
    let mut slack = f64::INFINITY;
    let (mut cs, mut cp) = (*s, p.clone());
    for &i in word {
        let gen = *GeneratorId::BASE.get(i).ok_or_else(|| Error::Config(format!("generator index {i} out of range")))?;
        let (c, sl) = prefactor_tracked(which, gen, &cs, &cp)?;
        acc = acc * c;
        slack = slack.min(sl);
        (cs, cp) = base_generator(which, gen)?.apply(&cs, &cp)?;
    }
    Ok((acc, slack, cs, cp))
}

pub(crate) fn chain_slack(which: Which, word: &[usize], s: &ShiftVector, p: &BasePoint) -> Result<(f64, ShiftVector, BasePoint)> {
    chain_prefactor(which, word, s, p).map(|(_, sl, cs, cp)| (sl, cs, cp))
}

/// Chained identity `coef(s,p) = ∏ C · coef(word(s,p))`.
pub fn verify_chain(
    which: Which,
    word: &[usize],
    s: &ShiftVector,
    p: &BasePoint,
    route: Route,
    ctrl: &SeriesControl,
) -> Result<IdentityCheck> {
    let (c, _, img_s, img_p) = chain_prefactor(which, word, s, p)?;
    let lhs = coefficient(which, route, s, p, ctrl)?;
    let rhs = c * coefficient(which, route, &img_s, &img_p, ctrl)?;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Decimal string form used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub a: String,
    pub b: String,
    pub c: String,
    pub x: String,
    pub q: String,
}

impl PointRecord {
    pub fn of(p: &BasePoint) -> Self {
        let d = p.precision().digits();
        PointRecord {
            a: p.a.to_decimal(d),
            b: p.b.to_decimal(d),
            c: p.c.to_decimal(d),
            x: p.x.to_decimal(d),
            q: p.q.to_decimal(d),
        }
    }
}

/// One identity in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub shift: ShiftVector,
    /// Generator word, `"e"` for the identity element; base checks use the formula label.
    pub word: String,
    /// Canonical form of the group element, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    /// Formula applied at each step.
    pub chain: Vec<String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub error: Option<String>,
    pub tol: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Base,
    All,
    Bridge,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Base => "base",
            Suite::All => "all",
            Suite::Bridge => "bridge",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub v: u32,
    pub suite: Suite,
    pub which: Which,
    pub route: Route,
    pub precision: u32,
    pub base_tol: String,
    pub point: PointRecord,
    pub identities: usize,
    pub failures: usize,
    pub max_error: Option<String>,
    pub passed: bool,
    pub entries: Vec<IdentityRecord>,
}

/// Settings shared by the suites.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub route: Route,
    pub shifts: Vec<ShiftVector>,
    pub base_tol: QReal,
    pub ctrl: SeriesControl,
}

impl VerifyOptions {
    /// Contiguous route, default shifts, tolerance `1e-9` in double mode and `1e-30` otherwise.
    pub fn new(prec: Precision) -> Self {
        let base_tol = if prec.is_double() { prec.pow10(-9) } else { prec.pow10(-30) };
        VerifyOptions {
            route: Route::Contiguous,
            shifts: ShiftVector::default_suite(),
            base_tol,
            ctrl: SeriesControl::new(prec),
        }
    }
}

struct Outcome {
    check: Result<IdentityCheck>,
    tol: QReal,
}

fn record(shift: ShiftVector, word: String, element: Option<String>, chain: Vec<String>, out: Outcome) -> IdentityRecord {
    let d = out.tol.precision().digits();
    let tol = out.tol.to_decimal(d);
    match out.check {
        Ok(c) => {
            let pass = c.error < out.tol;
            IdentityRecord {
                shift,
                word,
                element,
                chain,
                lhs: Some(c.lhs.to_decimal(d)),
                rhs: Some(c.rhs.to_decimal(d)),
                error: Some(c.error.to_decimal(d)),
                tol,
                pass,
                message: None,
            }
        }
        Err(e) => IdentityRecord {
            shift,
            word,
            element,
            chain,
            lhs: None,
            rhs: None,
            error: None,
            tol,
            pass: false,
            message: Some(e.to_string()),
        },
    }
}

fn assemble(suite: Suite, which: Which, p: &BasePoint, opts: &VerifyOptions, entries: Vec<IdentityRecord>, errors: Vec<Option<QReal>>) -> VerificationReport {
    let failures = entries.iter().filter(|e| !e.pass).count();
    let max_error = errors.into_iter().flatten().reduce(|a, b| if b > a { b } else { a });
    let d = p.precision().digits();
    VerificationReport {
        v: 1,
        suite,
        which,
        route: opts.route,
        precision: d,
        base_tol: opts.base_tol.to_decimal(d),
        point: PointRecord::of(p),
        identities: entries.len(),
        failures,
        max_error: max_error.map(|e| e.to_decimal(d)),
        passed: failures == 0,
        entries,
    }
}

/// The four base formulas of `which` at each shift.
pub fn verify_base(p: &BasePoint, which: Which, opts: &VerifyOptions) -> VerificationReport {
    let jobs: Vec<(ShiftVector, FormulaId)> =
        opts.shifts.iter().flat_map(|&s| FormulaId::base(which).map(|f| (s, f))).collect();
    run_formula_jobs(Suite::Base, which, p, opts, jobs)
}

/// The bridge between `R` and `Q` at each shift.
pub fn verify_bridge(p: &BasePoint, opts: &VerifyOptions) -> VerificationReport {
    let jobs: Vec<(ShiftVector, FormulaId)> = opts.shifts.iter().map(|&s| (s, FormulaId::Bridge)).collect();
    run_formula_jobs(Suite::Bridge, Which::R, p, opts, jobs)
}

fn run_formula_jobs(suite: Suite, which: Which, p: &BasePoint, opts: &VerifyOptions, jobs: Vec<(ShiftVector, FormulaId)>) -> VerificationReport {
    let results: Vec<(IdentityRecord, Option<QReal>)> = jobs
        .par_iter()
        .map(|&(s, f)| {
            let check = verify_base_symmetry(f, &s, p, opts.route, &opts.ctrl);
            let err = check.as_ref().ok().map(|c| c.error.clone());
            let rec = record(s, f.label().to_string(), None, vec![f.label().to_string()], Outcome { check, tol: opts.base_tol.clone() });
            (rec, err)
        })
        .collect();
    let (entries, errors) = results.into_iter().unzip();
    assemble(suite, which, p, opts, entries, errors)
}

/// Every element of the 96-element group acting on `which`, via shortest words,
/// at each shift. Entries are ordered by shift, then by canonical element form.
pub fn verify_all(p: &BasePoint, which: Which, opts: &VerifyOptions) -> VerificationReport {
    let group: Group = match which {
        Which::Q => full_group(),
        Which::R => conjugated_group(),
    };
    let elements = group.sorted_by_canonical();
    let formulas = FormulaId::base(which);
    let jobs: Vec<(ShiftVector, usize)> = opts
        .shifts
        .iter()
        .flat_map(|&s| (0..elements.len()).map(move |i| (s, i)))
        .collect();
    let one = p.precision().one();
    let results: Vec<(IdentityRecord, Option<QReal>)> = jobs
        .par_iter()
        .map(|&(s, i)| {
            let el = elements[i];
            let tol = &opts.base_tol * &(&one + &p.precision().int(el.word.len() as i64));
            let check = verify_chain(which, &el.word, &s, p, opts.route, &opts.ctrl);
            let err = check.as_ref().ok().map(|c| c.error.clone());
            let chain = el.word.iter().map(|&g| formulas[g].label().to_string()).collect();
            let word = group.word_label(&el.word);
            (record(s, word, Some(el.transform.canonical()), chain, Outcome { check, tol }), err)
        })
        .collect();
    let (entries, errors) = results.into_iter().unzip();
    assemble(Suite::All, which, p, opts, entries, errors)
}
