//! Three-term relations for the basic hypergeometric series ₂φ₁ and the
//! symmetries of their coefficients.
//!
//! The crate evaluates ₂φ₁ and q-Pochhammer symbols at arbitrary precision,
//! computes the coefficients `Q` and `R` of
//!
//! ```text
//! φ(aq^k, bq^l; cq^m; xq^n) = Q · φ(aq, bq; cq; x) + R · φ(a, b; c; x)
//! ```
//!
//! enumerates the order-96 symmetry group acting on `(k,l,m,n; a,b,c,x)`,
//! and verifies the symmetry identities numerically.

pub mod coeff;
pub mod error;
pub mod group;
pub mod qseries;
pub mod real;
pub mod verify;

pub use coeff::{CoeffResult, Route, ShiftVector};
pub use error::{Error, Result};
pub use group::{GeneratorId, Group, GroupElement, Transform};
pub use qseries::{phi21, phi21_sum, qpoch_finite, qpoch_infinite, BasePoint, Convention, SeriesControl, SeriesSum};
pub use real::{Precision, QReal};
