//! Exact integer representation of the parameter mappings.
//!
//! A [`Transform`] acts on `((k,l,m,n), (a,b,c,x))` by
//!
//! ```text
//! (k,l,m,n) ↦ M·(k,l,m,n) + v
//! slot_i    ↦ q^{e_i + F_i·(k,l,m,n)} · a^{E_i0} b^{E_i1} c^{E_i2} x^{E_i3}
//! ```
//!
//! In exponent coordinates (`a = q^α`, …) this is an integer affine map on
//! `ℤ⁴ × ℝ⁴`, which is why composition and inversion stay exact.

use std::fmt;

use crate::coeff::ShiftVector;
use crate::error::{Error, Result};
use crate::qseries::BasePoint;

pub type IMat4 = [[i64; 4]; 4];
pub type IVec4 = [i64; 4];

pub(crate) const IDENTITY4: IMat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn mat_mul(a: &IMat4, b: &IMat4) -> IMat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

fn mat_vec(a: &IMat4, v: &IVec4) -> IVec4 {
    let mut out = [0; 4];
    for (i, row) in a.iter().enumerate() {
        out[i] = (0..4).map(|t| row[t] * v[t]).sum();
    }
    out
}

fn vec_add(a: &IVec4, b: &IVec4) -> IVec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn vec_neg(a: &IVec4) -> IVec4 {
    [-a[0], -a[1], -a[2], -a[3]]
}

fn det3(m: [[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(a: &IMat4, row: usize, col: usize) -> i64 {
    let mut m = [[0; 3]; 3];
    let rows = (0..4).filter(|&r| r != row);
    for (ri, r) in rows.enumerate() {
        let cols = (0..4).filter(|&c| c != col);
        for (ci, c) in cols.enumerate() {
            m[ri][ci] = a[r][c];
        }
    }
    det3(m)
}

pub fn det4(a: &IMat4) -> i64 {
    (0..4).map(|c| if c % 2 == 0 { 1 } else { -1 } * a[0][c] * minor(a, 0, c)).sum()
}

/// Inverse of a unimodular integer matrix, `None` if `det ≠ ±1`.
pub fn unimodular_inverse(a: &IMat4) -> Option<IMat4> {
    let d = det4(a);
    if d != 1 && d != -1 {
        return None;
    }
    let mut out = [[0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            // adjugate is the transposed cofactor matrix
            *v = sign * minor(a, j, i) * d;
        }
    }
    Some(out)
}

/// `(k,l,m,n) ↦ matrix·(k,l,m,n) + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexAffine {
    pub matrix: IMat4,
    pub offset: IVec4,
}

impl IndexAffine {
    pub fn apply(&self, s: &ShiftVector) -> ShiftVector {
        ShiftVector::from(vec_add(&mat_vec(&self.matrix, &s.to_array()), &self.offset))
    }
}

/// One output slot: `q^{q_const + q_shift·(k,l,m,n)} · ∏ slot_j^{exponents_j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialSlot {
    pub exponents: IVec4,
    pub q_const: i64,
    pub q_shift: IVec4,
}

impl MonomialSlot {
    pub const fn new(exponents: IVec4, q_const: i64, q_shift: IVec4) -> Self {
        MonomialSlot { exponents, q_const, q_shift }
    }
}

/// Monomial action on `(a, b, c, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMap {
    pub slots: [MonomialSlot; 4],
}

impl MonomialMap {
    pub fn exponent_matrix(&self) -> IMat4 {
        [self.slots[0].exponents, self.slots[1].exponents, self.slots[2].exponents, self.slots[3].exponents]
    }

    fn shift_matrix(&self) -> IMat4 {
        [self.slots[0].q_shift, self.slots[1].q_shift, self.slots[2].q_shift, self.slots[3].q_shift]
    }

    fn consts(&self) -> IVec4 {
        [self.slots[0].q_const, self.slots[1].q_const, self.slots[2].q_const, self.slots[3].q_const]
    }

    fn from_parts(e: IMat4, f: IMat4, c: IVec4) -> Self {
        let slot = |i: usize| MonomialSlot::new(e[i], c[i], f[i]);
        MonomialMap { slots: [slot(0), slot(1), slot(2), slot(3)] }
    }
}

/// Exact group element: index action plus parameter action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transform {
    pub idx: IndexAffine,
    pub mon: MonomialMap,
}

impl Transform {
    /// Build a transform, rejecting non-unimodular index or exponent matrices.
    pub fn new(idx: IndexAffine, mon: MonomialMap) -> Result<Self> {
        if det4(&idx.matrix).abs() != 1 {
            return Err(Error::Config("index matrix is not invertible over the integers".into()));
        }
        if det4(&mon.exponent_matrix()).abs() != 1 {
            return Err(Error::Config("exponent matrix is not invertible over the integers".into()));
        }
        Ok(Transform { idx, mon })
    }

    pub fn identity() -> Self {
        let slot = |i: usize| MonomialSlot::new(IDENTITY4[i], 0, [0; 4]);
        Transform {
            idx: IndexAffine { matrix: IDENTITY4, offset: [0; 4] },
            mon: MonomialMap { slots: [slot(0), slot(1), slot(2), slot(3)] },
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Transform::identity()
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Transform) -> Transform {
        compose(first, self)
    }

    pub fn inverse(&self) -> Transform {
        let m_inv = unimodular_inverse(&self.idx.matrix).expect("unimodular index matrix");
        let e_inv = unimodular_inverse(&self.mon.exponent_matrix()).expect("unimodular exponent matrix");
        let f = self.mon.shift_matrix();
        let v = self.idx.offset;
        let e0 = self.mon.consts();
        // s = M⁻¹(s' - v);  θ = E⁻¹(θ' - F s - e0)
        let offset = vec_neg(&mat_vec(&m_inv, &v));
        let f_new = mat_mul(&e_inv, &mat_mul(&f, &m_inv));
        let f_new = f_new.map(|row| vec_neg(&row));
        let fmv = mat_vec(&mat_mul(&f, &m_inv), &v);
        let c_new = mat_vec(&e_inv, &[fmv[0] - e0[0], fmv[1] - e0[1], fmv[2] - e0[2], fmv[3] - e0[3]]);
        Transform {
            idx: IndexAffine { matrix: m_inv, offset },
            mon: MonomialMap::from_parts(e_inv, f_new, c_new),
        }
    }

    /// Integer part of the action.
    pub fn apply_shift(&self, s: &ShiftVector) -> ShiftVector {
        self.idx.apply(s)
    }

    /// Numeric action on `(shift, point)`; q-exponents use the input shift.
    pub fn apply(&self, s: &ShiftVector, p: &BasePoint) -> Result<(ShiftVector, BasePoint)> {
        let s_new = self.apply_shift(s);
        let sv = s.to_array();
        let slots = p.slots();
        let eval = |slot: &MonomialSlot| {
            let qe = slot.q_const + (0..4).map(|j| slot.q_shift[j] * sv[j]).sum::<i64>();
            let mut v = p.q.powi(qe);
            for (j, &e) in slot.exponents.iter().enumerate() {
                if e != 0 {
                    v = v * slots[j].powi(e);
                }
            }
            v
        };
        let [sa, sb, sc, sx] = &self.mon.slots;
        let image = BasePoint { a: eval(sa), b: eval(sb), c: eval(sc), x: eval(sx), q: p.q.clone() };
        for (name, v) in [("a", &image.a), ("b", &image.b), ("c", &image.c), ("x", &image.x)] {
            if !v.is_positive() || !v.is_finite() {
                return Err(Error::Domain(format!("image slot {name} = {v} leaves the positive domain")));
            }
        }
        Ok((s_new, image))
    }

    /// Stable text form listing every integer entry; equal transforms give equal strings.
    pub fn canonical(&self) -> String {
        const IDX: [&str; 4] = ["k", "l", "m", "n"];
        const PAR: [&str; 4] = ["a", "b", "c", "x"];
        let idx: Vec<String> =
            (0..4).map(|i| linear_form(&self.idx.matrix[i], self.idx.offset[i], &IDX)).collect();
        let mon: Vec<String> = self.mon.slots.iter().map(|s| monomial_form(s, &PAR, &IDX)).collect();
        format!("({}) ; ({})", idx.join(", "), mon.join(", "))
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// `second ∘ first` (apply `first`, then `second`).
pub fn compose(first: &Transform, second: &Transform) -> Transform {
    let (m1, v1) = (&first.idx.matrix, &first.idx.offset);
    let (m2, v2) = (&second.idx.matrix, &second.idx.offset);
    let (e1, f1, c1) = (first.mon.exponent_matrix(), first.mon.shift_matrix(), first.mon.consts());
    let (e2, f2, c2) = (second.mon.exponent_matrix(), second.mon.shift_matrix(), second.mon.consts());
    let matrix = mat_mul(m2, m1);
    let offset = vec_add(&mat_vec(m2, v1), v2);
    let e = mat_mul(&e2, &e1);
    let f = {
        let a = mat_mul(&f2, m1);
        let b = mat_mul(&e2, &f1);
        let mut out = [[0; 4]; 4];
        for i in 0..4 {
            out[i] = vec_add(&a[i], &b[i]);
        }
        out
    };
    let c = vec_add(&vec_add(&c2, &mat_vec(&f2, v1)), &mat_vec(&e2, &c1));
    Transform { idx: IndexAffine { matrix, offset }, mon: MonomialMap::from_parts(e, f, c) }
}

/// Product in the usual notation: `product([s, t, u]) = s ∘ t ∘ u` (`u` acts first).
pub fn product<'a, I>(factors: I) -> Transform
where
    I: IntoIterator<Item = &'a Transform>,
{
    factors.into_iter().fold(Transform::identity(), |acc, t| compose(t, &acc))
}

/// `t ∘ t ∘ … ∘ t` (`e` times).
pub fn power(t: &Transform, e: usize) -> Transform {
    (0..e).fold(Transform::identity(), |acc, _| compose(&acc, t))
}

fn linear_form(coeffs: &IVec4, constant: i64, names: &[&str; 4]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if *c == 0 {
            continue;
        }
        let sign = if *c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = c.abs();
        out.push_str(sign);
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(name);
    }
    if constant != 0 || out.is_empty() {
        if constant >= 0 && !out.is_empty() {
            out.push('+');
        }
        out.push_str(&constant.to_string());
    }
    out
}

fn monomial_form(slot: &MonomialSlot, params: &[&str; 4], idx: &[&str; 4]) -> String {
    let mut factors = Vec::new();
    let qexp = linear_form(&slot.q_shift, slot.q_const, idx);
    match qexp.as_str() {
        "0" => {}
        "1" => factors.push("q".to_string()),
        e if slot.q_shift == [0; 4] => factors.push(format!("q^{e}")),
        e => factors.push(format!("q^({e})")),
    }
    for (e, name) in slot.exponents.iter().zip(params) {
        match e {
            0 => {}
            1 => factors.push(name.to_string()),
            e => factors.push(format!("{name}^{e}")),
        }
    }
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}
