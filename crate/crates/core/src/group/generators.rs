use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::transform::{compose, IndexAffine, MonomialMap, MonomialSlot, Transform, IDENTITY4};
use crate::error::{Error, Result};

/// Named generators of the symmetry group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GeneratorId {
    Sigma0,
    Sigma1,
    Sigma2,
    Sigma3,
    Sigma4,
    Sigma5,
    Sigma6,
    Tau,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 8] = [
        GeneratorId::Sigma0,
        GeneratorId::Sigma1,
        GeneratorId::Sigma2,
        GeneratorId::Sigma3,
        GeneratorId::Sigma4,
        GeneratorId::Sigma5,
        GeneratorId::Sigma6,
        GeneratorId::Tau,
    ];

    /// The four generators of the full group.
    pub const BASE: [GeneratorId; 4] =
        [GeneratorId::Sigma0, GeneratorId::Sigma1, GeneratorId::Sigma2, GeneratorId::Sigma3];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::Sigma0 => "s0",
            GeneratorId::Sigma1 => "s1",
            GeneratorId::Sigma2 => "s2",
            GeneratorId::Sigma3 => "s3",
            GeneratorId::Sigma4 => "s4",
            GeneratorId::Sigma5 => "s5",
            GeneratorId::Sigma6 => "s6",
            GeneratorId::Tau => "tau",
        }
    }

    /// Index `i` for `σᵢ`; `None` for `τ`.
    pub fn sigma_index(self) -> Option<usize> {
        GeneratorId::ALL[..7].iter().position(|&g| g == self)
    }

    pub fn transform(self) -> Transform {
        generator(self)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("sigma").or_else(|| t.strip_prefix('s')).or_else(|| t.strip_prefix('σ')).unwrap_or(&t);
        match t {
            "0" => Ok(GeneratorId::Sigma0),
            "1" => Ok(GeneratorId::Sigma1),
            "2" => Ok(GeneratorId::Sigma2),
            "3" => Ok(GeneratorId::Sigma3),
            "4" => Ok(GeneratorId::Sigma4),
            "5" => Ok(GeneratorId::Sigma5),
            "6" => Ok(GeneratorId::Sigma6),
            "tau" | "τ" | "t" => Ok(GeneratorId::Tau),
            _ => Err(Error::Parse(format!("unknown generator '{s}'"))),
        }
    }
}

impl From<GeneratorId> for String {
    fn from(g: GeneratorId) -> String {
        g.name().to_string()
    }
}

impl TryFrom<String> for GeneratorId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Parse a comma separated generator list such as `s3,s4,s5`.
pub fn parse_generator_list(s: &str) -> Result<Vec<GeneratorId>> {
    let gens: Vec<GeneratorId> = s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if gens.is_empty() {
        return Err(Error::Parse("empty generator list".into()));
    }
    Ok(gens)
}

const Z: [i64; 4] = [0; 4];

const fn e(i: usize) -> [i64; 4] {
    let mut v = [0; 4];
    v[i] = 1;
    v
}

fn build(matrix: [[i64; 4]; 4], offset: [i64; 4], slots: [([i64; 4], i64); 4]) -> Transform {
    let slot = |i: usize| MonomialSlot::new(slots[i].0, slots[i].1, Z);
    Transform::new(IndexAffine { matrix, offset }, MonomialMap { slots: [slot(0), slot(1), slot(2), slot(3)] })
        .expect("generator tables are unimodular")
}

/// Exact displayed mapping for `id`.
pub fn generator(id: GeneratorId) -> Transform {
    match id {
        // (-k,-l,-m,-n; aq^k, bq^l, cq^m, xq^n)
        GeneratorId::Sigma0 => {
            let neg = IDENTITY4.map(|r| r.map(|v| -v));
            let slot = |i: usize| MonomialSlot::new(e(i), 0, e(i));
            let t = Transform {
                idx: IndexAffine { matrix: neg, offset: Z },
                mon: MonomialMap { slots: [slot(0), slot(1), slot(2), slot(3)] },
            };
            Transform::new(t.idx, t.mon).expect("unimodular")
        }
        // (n, m-k, l+n, k; x, c/a, bx, a)
        GeneratorId::Sigma1 => build(
            [[0, 0, 0, 1], [-1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 0]],
            Z,
            [(e(3), 0), ([-1, 0, 1, 0], 0), ([0, 1, 0, 1], 0), (e(0), 0)],
        ),
        // (-k,-l,-m,k+l-m+n; q/a, q/b, q²/c, abx/c)
        GeneratorId::Sigma2 => build(
            [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [1, 1, -1, 1]],
            Z,
            [([-1, 0, 0, 0], 1), ([0, -1, 0, 0], 1), ([0, 0, -1, 0], 2), ([1, 1, -1, 1], 0)],
        ),
        // (l,k,m,n; b,a,c,x)
        GeneratorId::Sigma3 => build([e(1), e(0), e(2), e(3)], Z, [(e(1), 0), (e(0), 0), (e(2), 0), (e(3), 0)]),
        // (-n, l, m-k-n, -k; q/x, b, cq/(ax), q/a)
        GeneratorId::Sigma4 => build(
            [[0, 0, 0, -1], [0, 1, 0, 0], [-1, 0, 1, -1], [-1, 0, 0, 0]],
            Z,
            [([0, 0, 0, -1], 1), (e(1), 0), ([-1, 0, 1, -1], 1), ([-1, 0, 0, 0], 1)],
        ),
        // (k-m, l-m, -m, n; aq/c, bq/c, q²/c, x)
        GeneratorId::Sigma5 => build(
            [[1, 0, -1, 0], [0, 1, -1, 0], [0, 0, -1, 0], e(3)],
            Z,
            [([1, 0, -1, 0], 1), ([0, 1, -1, 0], 1), ([0, 0, -1, 0], 2), (e(3), 0)],
        ),
        // (m-l, m-k, m, k+l-m+n; c/b, c/a, c, abx/c)
        GeneratorId::Sigma6 => build(
            [[0, -1, 1, 0], [-1, 0, 1, 0], [0, 0, 1, 0], [1, 1, -1, 1]],
            Z,
            [([0, -1, 1, 0], 0), ([-1, 0, 1, 0], 0), (e(2), 0), ([1, 1, -1, 1], 0)],
        ),
        // (k+1, l+1, m+1, n; a/q, b/q, c/q, x)
        GeneratorId::Tau => build(IDENTITY4, [1, 1, 1, 0], [(e(0), -1), (e(1), -1), (e(2), -1), (e(3), 0)]),
    }
}

/// `τσᵢτ⁻¹` for `i = 0..3`, the generators acting on the `R` coefficient.
pub fn conjugated_generators() -> Vec<Transform> {
    let tau = generator(GeneratorId::Tau);
    let tau_inv = tau.inverse();
    GeneratorId::BASE.iter().map(|&g| compose(&compose(&tau_inv, &generator(g)), &tau)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ShiftVector;

    #[test]
    fn parse_names() {
        assert_eq!("s3".parse::<GeneratorId>().unwrap(), GeneratorId::Sigma3);
        assert_eq!("Sigma5".parse::<GeneratorId>().unwrap(), GeneratorId::Sigma5);
        assert_eq!("σ0".parse::<GeneratorId>().unwrap(), GeneratorId::Sigma0);
        assert_eq!("tau".parse::<GeneratorId>().unwrap(), GeneratorId::Tau);
        assert!("s7".parse::<GeneratorId>().is_err());
        assert_eq!(parse_generator_list("s3, s4,s5").unwrap().len(), 3);
        assert!(parse_generator_list(" , ").is_err());
    }

    #[test]
    fn sigma_index() {
        assert_eq!(GeneratorId::Sigma6.sigma_index(), Some(6));
        assert_eq!(GeneratorId::Tau.sigma_index(), None);
    }

    #[test]
    fn conjugate_index_actions() {
        let conj = conjugated_generators();
        let s = ShiftVector::new(3, -1, 2, 5);
        assert_eq!(conj[0].apply_shift(&s), ShiftVector::new(2 - 3, 2 + 1, 2 - 2, -5));
        assert_eq!(conj[3].apply_shift(&s), ShiftVector::new(-1, 3, 2, 5));
        assert_eq!(conj[3], generator(GeneratorId::Sigma3));
    }

    #[test]
    fn sigma1_display() {
        assert_eq!(generator(GeneratorId::Sigma1).canonical(), "(n, -k+m, l+n, k) ; (x, a^-1*c, b*x, a)");
        assert_eq!(generator(GeneratorId::Sigma0).canonical(), "(-k, -l, -m, -n) ; (q^(k)*a, q^(l)*b, q^(m)*c, q^(n)*x)");
    }
}
