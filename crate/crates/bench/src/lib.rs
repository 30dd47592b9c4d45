//! Shared fixtures for the benchmarks.

use stabp3::{parse_q, ChernVector, Q};

/// Rational point `(α, β, a, b)` parsed from literals.
pub fn point(alpha: &str, beta: &str, a: &str, b: &str) -> [Q; 4] {
    [alpha, beta, a, b].map(|s| parse_q(s).expect("fixture literal"))
}

/// Ideal sheaf of a point, `ch = (1, 0, 0, -1)`.
pub fn point_ideal() -> ChernVector<Q> {
    "1,0,0,-1".parse().expect("fixture class")
}
