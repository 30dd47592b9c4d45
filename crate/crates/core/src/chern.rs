//! Numerical classes on a polarized threefold.
//!
//! A class is stored through its `H`-degrees `(H³ch₀, H²ch₁, Hch₂, ch₃)`.
//! Twisting by `e^{-βH}` acts on these coordinates independently of `H³`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::scalar::{parse_q, render_q, Scalar, Q};

/// Intersection data of the polarized variety.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietyData {
    /// `H³`.
    pub degree: u32,
    /// Todd class coefficients in powers of `H`.
    pub todd: [Q; 4],
    pub euler_enabled: bool,
}

impl VarietyData {
    pub fn p3() -> Self {
        Self {
            degree: 1,
            todd: [
                Q::from_i64(1),
                Q::from_i64(2),
                Q::from_ratio(11, 6),
                Q::from_i64(1),
            ],
            euler_enabled: true,
        }
    }

    /// A variety with the given `H³` and no Euler pairing.
    pub fn generic(degree: u32) -> Self {
        Self {
            degree: degree.max(1),
            todd: [Q::one(), Q::zero(), Q::zero(), Q::zero()],
            euler_enabled: false,
        }
    }
}

impl Default for VarietyData {
    fn default() -> Self {
        Self::p3()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChernVector<S = Q> {
    pub e0: S,
    pub e1: S,
    pub e2: S,
    pub e3: S,
}

impl<S: Scalar> ChernVector<S> {
    pub fn new(e0: S, e1: S, e2: S, e3: S) -> Self {
        Self { e0, e1, e2, e3 }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn from_array(c: [S; 4]) -> Self {
        let [e0, e1, e2, e3] = c;
        Self { e0, e1, e2, e3 }
    }

    pub fn to_array(&self) -> [S; 4] {
        [
            self.e0.clone(),
            self.e1.clone(),
            self.e2.clone(),
            self.e3.clone(),
        ]
    }

    /// Class of `O(d)` on a variety of degree one.
    pub fn line_bundle(d: i64) -> Self {
        Self::line_bundle_at(S::from_i64(d))
    }

    /// `e^{sH}`.
    pub fn line_bundle_at(s: S) -> Self {
        let s2 = s.clone() * s.clone();
        let s3 = s2.clone() * s.clone();
        Self::new(S::one(), s, s2 / S::from_i64(2), s3 / S::from_i64(6))
    }

    pub fn skyscraper() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.e0.is_zero() && self.e1.is_zero() && self.e2.is_zero() && self.e3.is_zero()
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(
            self.e0.clone() * k.clone(),
            self.e1.clone() * k.clone(),
            self.e2.clone() * k.clone(),
            self.e3.clone() * k.clone(),
        )
    }

    /// `e^{-βH}·ch`.
    pub fn twist(&self, beta: &S) -> Self {
        let b = beta.clone();
        let b2 = b.clone() * b.clone() / S::from_i64(2);
        let b3 = b2.clone() * b.clone() / S::from_i64(3);
        Self::new(
            self.e0.clone(),
            self.e1.clone() - b.clone() * self.e0.clone(),
            self.e2.clone() - b.clone() * self.e1.clone() + b2.clone() * self.e0.clone(),
            self.e3.clone() - b * self.e2.clone() + b2 * self.e1.clone() - b3 * self.e0.clone(),
        )
    }

    /// Class of the derived dual.
    pub fn dual(&self) -> Self {
        Self::new(
            self.e0.clone(),
            -self.e1.clone(),
            self.e2.clone(),
            -self.e3.clone(),
        )
    }

    /// Class of `E ⊗ O(cH)`.
    pub fn tensor_line(&self, c: i64) -> Self {
        self.twist(&S::from_i64(-c))
    }

    /// Coordinates `(e0, e1 − βe0, …)` of the `β`-twisted class as an array.
    pub fn zeta(&self, beta: &S) -> [S; 4] {
        self.twist(beta).to_array()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ChernVector<T> {
        ChernVector::new(f(&self.e0), f(&self.e1), f(&self.e2), f(&self.e3))
    }

    pub fn to_f64(&self) -> ChernVector<f64> {
        self.map(|x| x.to_f64())
    }

    /// `Δ̄ = e1² − 2 e0 e2`.
    pub fn discriminant(&self) -> S {
        self.e1.clone() * self.e1.clone() - S::from_i64(2) * self.e0.clone() * self.e2.clone()
    }
}

impl ChernVector<Q> {
    pub fn from_ints(e0: i64, e1: i64, e2: i64, e3: i64) -> Self {
        Self::new(
            Q::from_i64(e0),
            Q::from_i64(e1),
            Q::from_i64(e2),
            Q::from_i64(e3),
        )
    }

    /// From the integer coordinates `(e0, e1, 2e2, 6e3)`.
    pub fn from_lattice(t: [i64; 4]) -> Self {
        Self::new(
            Q::from_i64(t[0]),
            Q::from_i64(t[1]),
            Q::from_ratio(t[2], 2),
            Q::from_ratio(t[3], 6),
        )
    }

    /// `(e0, e1, 2e2, 6e3)` when the class is a lattice point of ℙ³.
    pub fn lattice_tuple(&self) -> Option<[i64; 4]> {
        let scaled = [
            self.e0.clone(),
            self.e1.clone(),
            self.e2.clone() * Q::from_i64(2),
            self.e3.clone() * Q::from_i64(6),
        ];
        let mut out = [0i64; 4];
        for (o, s) in out.iter_mut().zip(scaled.iter()) {
            if !s.is_integer() {
                return None;
            }
            *o = s.to_integer().to_i64()?;
        }
        Some(out)
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_tuple().is_some()
    }

    pub fn render(&self) -> String {
        format!(
            "{},{},{},{}",
            render_q(&self.e0),
            render_q(&self.e1),
            render_q(&self.e2),
            render_q(&self.e3)
        )
    }
}

impl std::str::FromStr for ChernVector<Q> {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(ParseError::Class(s.to_string()));
        }
        let mut it = parts.into_iter().map(parse_q);
        Ok(Self::new(
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
        ))
    }
}

impl<S: Scalar> fmt::Display for ChernVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.e0, self.e1, self.e2, self.e3)
    }
}

impl<S: Scalar> Add for ChernVector<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.e0 + o.e0, self.e1 + o.e1, self.e2 + o.e2, self.e3 + o.e3)
    }
}

impl<S: Scalar> Sub for ChernVector<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.e0 - o.e0, self.e1 - o.e1, self.e2 - o.e2, self.e3 - o.e3)
    }
}

impl<S: Scalar> Neg for ChernVector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e0, -self.e1, -self.e2, -self.e3)
    }
}

impl<S: Scalar> Mul<S> for ChernVector<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        self.scale(&k)
    }
}

/// Free-function form of [`ChernVector::twist`].
pub fn twist<S: Scalar>(v: &ChernVector<S>, beta: &S) -> ChernVector<S> {
    v.twist(beta)
}

pub fn dual<S: Scalar>(v: &ChernVector<S>) -> ChernVector<S> {
    v.dual()
}

pub fn tensor_line<S: Scalar>(v: &ChernVector<S>, c: i64) -> ChernVector<S> {
    v.tensor_line(c)
}

/// `χ(E, F)` by Hirzebruch–Riemann–Roch.
pub fn euler<S: Scalar>(var: &VarietyData, v: &ChernVector<S>, w: &ChernVector<S>) -> Result<S> {
    if !var.euler_enabled {
        return Err(Error::EulerUnavailable);
    }
    let deg = S::from_i64(var.degree as i64);
    let a: Vec<S> = v.dual().to_array().into_iter().map(|x| x / deg.clone()).collect();
    let b: Vec<S> = w.to_array().into_iter().map(|x| x / deg.clone()).collect();
    let td: Vec<S> = var.todd.iter().map(S::from_q).collect();
    let mut acc = S::zero();
    for i in 0..4 {
        for j in 0..4 - i {
            let k = 3 - i - j;
            acc = acc + a[i].clone() * b[j].clone() * td[k].clone();
        }
    }
    Ok(acc * deg)
}
