//! Numeric backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Q`] (arbitrary precision rationals, all comparisons exact) and
//! `f64` (comparisons against zero use the process-wide tolerance).

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Exact rational scalar.
pub type Q = BigRational;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Comparison tolerance used by the floating point backend.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Sets the floating point comparison tolerance. Non-positive values are ignored.
pub fn set_tolerance(tol: f64) {
    if tol > 0.0 && tol.is_finite() {
        TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + num_traits::Num
    + 'static
{
    /// True for backends whose arithmetic and comparisons are exact.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Exact for the rational backend (every finite double is a dyadic rational).
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_q(q: &Q) -> Self;

    /// Sign of the value. The floating point backend treats `|x| <= tolerance()` as zero.
    fn sign(&self) -> Ordering;

    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn is_nil(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn abs_val(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Largest integer `n` with `n <= self` (tolerance-aware on `f64`).
    fn floor_i64(&self) -> i64;

    /// Smallest integer `n` with `n >= self` (tolerance-aware on `f64`).
    fn ceil_i64(&self) -> i64 {
        -(-self.clone()).floor_i64()
    }

    /// Tolerance-aware comparison.
    fn cmp_to(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Exact textual form: `p/q` for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(Zero::zero)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor out of i64 range")
    }

    fn cmp_to(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_q(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> Ordering {
        let tol = tolerance();
        if *self > tol {
            Ordering::Greater
        } else if *self < -tol {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn floor_i64(&self) -> i64 {
        let r = self.round();
        if (self - r).abs() <= tolerance() {
            r as i64
        } else {
            self.floor() as i64
        }
    }

    fn render(&self) -> String {
        format!("{self:?}")
    }
}

/// Converts an exact rational into any backend.
pub fn from_q<S: Scalar>(q: &Q) -> S {
    S::from_q(q)
}

/// Parses `p/q`, integers, and decimals such as `0.25` or `-1.5e-3` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q, ParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseError::Number(text.to_string()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| ParseError::Number(text.to_string()))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| ParseError::Number(text.to_string()))?;
        if q.is_zero() {
            return Err(ParseError::Number(text.to_string()));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp: i32 = s[i + 1..]
                .parse()
                .map_err(|_| ParseError::Number(text.to_string()))?;
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(ParseError::Number(text.to_string()));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(
        BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
            .map_err(|_| ParseError::Number(text.to_string()))?,
    );
    let scale = exponent - frac_part.len() as i32;
    if exponent.unsigned_abs() > 4096 {
        return Err(ParseError::Number(text.to_string()));
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if negative { -value } else { value })
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn render_q(q: &Q) -> String {
    let reduced = q.reduced();
    if reduced.denom().is_one() {
        reduced.numer().to_string()
    } else {
        format!("{}/{}", reduced.numer(), reduced.denom())
    }
}

/// Greatest common divisor helper for integer tuples.
pub fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, v| g.gcd(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("-1/2").unwrap(), Q::from_ratio(-1, 2));
        assert_eq!(parse_q("0.25").unwrap(), Q::from_ratio(1, 4));
        assert_eq!(parse_q("-1.5e-3").unwrap(), Q::from_ratio(-3, 2000));
        assert_eq!(parse_q("7").unwrap(), Q::from_i64(7));
        assert_eq!(parse_q("2e2").unwrap(), Q::from_i64(200));
        assert!(parse_q("x").is_err());
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q(".").is_err());
    }

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(render_q(&Q::from_ratio(4, -8)), "-1/2");
        assert_eq!(render_q(&Q::from_i64(-1)), "-1");
    }

    #[test]
    fn float_sign_uses_tolerance() {
        assert_eq!((1e-12f64).sign(), Ordering::Equal);
        assert_eq!((1e-6f64).sign(), Ordering::Greater);
        assert_eq!((2.0 - 1e-12f64).floor_i64(), 2);
        assert_eq!((-0.5f64).floor_i64(), -1);
        assert_eq!(Q::from_ratio(-1, 2).floor_i64(), -1);
        assert_eq!(Q::from_ratio(-1, 2).ceil_i64(), 0);
    }

    #[test]
    fn default_tolerance_bits() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_TOLERANCE);
    }
}
