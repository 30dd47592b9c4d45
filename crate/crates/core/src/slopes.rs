//! Slope `μ_β`, tilt slope `ν_{α,β}` and the heart trichotomy.

use std::cmp::Ordering;
use std::fmt;

use crate::chern::ChernVector;
use crate::scalar::Scalar;

/// A slope value, possibly `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum Slope<S> {
    Finite(S),
    PosInf,
}

impl<S: Scalar> Slope<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Slope::Finite(x) => Some(x),
            Slope::PosInf => None,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Slope::PosInf)
    }

    /// Total order with `+∞` above every finite value (tolerance-aware on `f64`).
    pub fn cmp_slope(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::PosInf, Slope::PosInf) => Ordering::Equal,
            (Slope::PosInf, _) => Ordering::Greater,
            (_, Slope::PosInf) => Ordering::Less,
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp_to(b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Slope::Finite(x) => x.to_f64(),
            Slope::PosInf => f64::INFINITY,
        }
    }
}

impl<S: Scalar> PartialOrd for Slope<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_slope(other))
    }
}

impl<S: Scalar> fmt::Display for Slope<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => write!(f, "{x}"),
            Slope::PosInf => write!(f, "+inf"),
        }
    }
}

/// `μ_β = (e1 − βe0)/e0`.
pub fn mu<S: Scalar>(v: &ChernVector<S>, beta: &S) -> Slope<S> {
    if v.e0.is_nil() {
        return Slope::PosInf;
    }
    Slope::Finite((v.e1.clone() - beta.clone() * v.e0.clone()) / v.e0.clone())
}

/// `ν_{α,β} = (e2^β − α²/2·e0)/(α·e1^β)`.
pub fn nu<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S) -> Slope<S> {
    let z = v.twist(beta);
    if z.e1.is_nil() {
        return Slope::PosInf;
    }
    let a2 = alpha.clone() * alpha.clone();
    Slope::Finite((z.e2 - a2 / S::from_i64(2) * z.e0) / (alpha.clone() * z.e1))
}

/// Which necessary condition for membership in the tilted heart a class meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trichotomy {
    PositiveCh1,
    Ch1ZeroImPositive,
    Ch1ZeroImZeroReNeg,
    Violates,
}

impl Trichotomy {
    pub fn name(self) -> &'static str {
        match self {
            Trichotomy::PositiveCh1 => "PositiveCh1",
            Trichotomy::Ch1ZeroImPositive => "Ch1ZeroImPositive",
            Trichotomy::Ch1ZeroImZeroReNeg => "Ch1ZeroImZeroReNeg",
            Trichotomy::Violates => "Violates",
        }
    }
}

/// Classifies `v` against the tilt charge `Z_{α,β}`.
///
/// This is only a necessary condition: a class passing it need not be the
/// class of an object of the heart.
pub fn trichotomy<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S) -> Trichotomy {
    let z = v.twist(beta);
    if z.e1.is_pos() {
        return Trichotomy::PositiveCh1;
    }
    if !z.e1.is_nil() {
        return Trichotomy::Violates;
    }
    let a2 = alpha.clone() * alpha.clone();
    let im = alpha.clone() * (z.e2.clone() - a2.clone() / S::from_i64(6) * z.e0.clone());
    if im.is_pos() {
        return Trichotomy::Ch1ZeroImPositive;
    }
    if im.is_nil() {
        // with e1^β = 0 the tilt real part is −e3^β
        let re = -z.e3;
        if re.is_neg() {
            return Trichotomy::Ch1ZeroImZeroReNeg;
        }
    }
    Trichotomy::Violates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn mu_examples() {
        let o3 = ChernVector::<Q>::line_bundle(3);
        assert_eq!(mu(&o3, &q(1)), Slope::Finite(q(2)));
        assert_eq!(mu(&ChernVector::<Q>::skyscraper(), &q(0)), Slope::PosInf);
        let steiner: ChernVector = "1,1,-1/2,1/6".parse().unwrap();
        assert_eq!(mu(&steiner, &q(0)), Slope::Finite(q(1)));
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&ChernVector::<Q>::line_bundle(1), &q(1), &q(0)), Slope::Finite(q(0)));
        assert_eq!(nu(&ChernVector::<Q>::skyscraper(), &q(2), &q(-1)), Slope::PosInf);
        assert_eq!(
            nu(&ChernVector::<Q>::line_bundle(3), &q(1), &q(1)),
            Slope::Finite(Q::from_ratio(3, 4))
        );
    }

    #[test]
    fn slope_order() {
        assert!(Slope::<Q>::PosInf > Slope::Finite(q(1000)));
        assert_eq!(Slope::<Q>::PosInf.cmp_slope(&Slope::PosInf), Ordering::Equal);
    }

    #[test]
    fn trichotomy_examples() {
        assert_eq!(
            trichotomy(&ChernVector::<Q>::line_bundle(1), &q(1), &q(0)),
            Trichotomy::PositiveCh1
        );
        assert_eq!(
            trichotomy(&ChernVector::<Q>::skyscraper(), &q(1), &q(0)),
            Trichotomy::Ch1ZeroImZeroReNeg
        );
        let shifted_o: ChernVector = "-1,0,0,0".parse().unwrap();
        assert_eq!(trichotomy(&shifted_o, &q(1), &q(0)), Trichotomy::Ch1ZeroImPositive);
        assert_eq!(
            trichotomy(&ChernVector::<Q>::line_bundle(0), &q(1), &q(0)),
            Trichotomy::Violates
        );
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-30i64..=30, 1i64..=9).prop_map(|(n, d)| Q::from_ratio(n, d))
    }

    proptest! {
        #[test]
        fn mu_shifts_with_beta(e0 in 1i64..6, e1 in -9i64..9, beta in small_q()) {
            let v = ChernVector::<Q>::from_ints(e0, e1, 0, 0);
            let m0 = mu(&v, &Q::from_i64(0)).finite().cloned().unwrap();
            prop_assert_eq!(mu(&v, &beta), Slope::Finite(m0 - beta));
        }

        #[test]
        fn nu_is_scale_invariant(
            e in prop::array::uniform4(small_q()),
            k in 1i64..7,
            alpha in (1i64..9, 1i64..5),
            beta in small_q(),
        ) {
            let v = ChernVector::from_array(e);
            let a = Q::from_ratio(alpha.0, alpha.1);
            prop_assert_eq!(nu(&v, &a, &beta), nu(&v.scale(&Q::from_i64(k)), &a, &beta));
        }
    }
}
