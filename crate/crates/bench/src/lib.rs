//! Shared fixtures for the benchmarks.

use qtriterm::{BasePoint, Precision};

/// The reference point `(a, b, c, x, q) = (0.6, 0.7, 0.55, 0.4, 0.3)`.
pub fn reference_point(prec: Precision) -> BasePoint {
    BasePoint::parse(prec, "0.6", "0.7", "0.55", "0.4", "0.3").expect("reference point parses")
}

/// Double mode and the default 50 digits.
pub fn precisions() -> [Precision; 2] {
    [Precision::DOUBLE, Precision::DEFAULT]
}
