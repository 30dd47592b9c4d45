//! Exceptional collections on ℙ³ at the level of classes, and the
//! algebraic stability conditions they support.

use crate::charges::ChargeSpec;
use crate::chern::{euler, ChernVector, VarietyData};
use crate::error::{Error, ParseError, Result};
use crate::linalg::{det, solve};
use crate::scalar::{Scalar, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct ExcCollection {
    pub classes: [ChernVector<Q>; 4],
    pub names: [String; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CollectionKind {
    Beilinson(i64),
    Mutate(Box<ExcCollection>, usize, Side),
}

/// `O(k), O(k+1), O(k+2), O(k+3)`.
pub fn beilinson(k: i64) -> ExcCollection {
    ExcCollection {
        classes: std::array::from_fn(|i| ChernVector::line_bundle(k + i as i64)),
        names: std::array::from_fn(|i| format!("O({})", k + i as i64)),
    }
}

/// Mutates the pair at positions `i, i+1` (1-based).
///
/// Left: `(E, F) ↦ (χ(E,F)E − F, E)`. Right: `(E, F) ↦ (F, χ(E,F)F − E)`.
pub fn mutate(var: &VarietyData, coll: &ExcCollection, i: usize, side: Side) -> Result<ExcCollection> {
    if !(1..=3).contains(&i) {
        return Err(Error::BadIndex(i));
    }
    let (p, n) = (i - 1, i);
    let (e, f) = (&coll.classes[p], &coll.classes[n]);
    let chi = euler(var, e, f)?;
    let mut out = coll.clone();
    match side {
        Side::Left => {
            out.classes[p] = e.scale(&chi) - f.clone();
            out.classes[n] = e.clone();
            out.names[p] = format!("L_{{{}}}{}", coll.names[p], coll.names[n]);
            out.names[n] = coll.names[p].clone();
        }
        Side::Right => {
            out.classes[p] = f.clone();
            out.classes[n] = f.scale(&chi) - e.clone();
            out.names[p] = coll.names[n].clone();
            out.names[n] = format!("R_{{{}}}{}", coll.names[n], coll.names[p]);
        }
    }
    Ok(out)
}

pub fn build_collection(var: &VarietyData, kind: &CollectionKind) -> Result<ExcCollection> {
    match kind {
        CollectionKind::Beilinson(k) => Ok(beilinson(*k)),
        CollectionKind::Mutate(coll, i, side) => mutate(var, coll, *i, *side),
    }
}

/// Parses `beilinson:k`.
pub fn parse_collection(text: &str) -> std::result::Result<ExcCollection, ParseError> {
    let err = || ParseError::Collection(text.to_string());
    let (kind, arg) = text.split_once(':').ok_or_else(err)?;
    match kind.trim() {
        "beilinson" => Ok(beilinson(arg.trim().parse().map_err(|_| err())?)),
        _ => Err(err()),
    }
}

/// Parses a mutation step `i:left` or `i:right`.
pub fn parse_mutation(text: &str) -> std::result::Result<(usize, Side), ParseError> {
    let err = || ParseError::Collection(text.to_string());
    let (i, side) = text.split_once(':').ok_or_else(err)?;
    let i = i.trim().parse().map_err(|_| err())?;
    let side = match side.trim() {
        "left" | "l" => Side::Left,
        "right" | "r" => Side::Right,
        _ => return Err(err()),
    };
    Ok((i, side))
}

/// Euler-level exceptionality: `χ(E_i, E_i) = 1` and `χ(E_j, E_i) = 0` for `j > i`.
pub fn check_exceptional(var: &VarietyData, coll: &ExcCollection) -> Result<bool> {
    for i in 0..4 {
        if euler(var, &coll.classes[i], &coll.classes[i])? != Q::from_i64(1) {
            return Ok(false);
        }
        for j in i + 1..4 {
            if !euler(var, &coll.classes[j], &coll.classes[i])?.is_nil() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Determinant of the classes as rows of `(e0, e1, e2, e3)`.
pub fn basis_determinant(coll: &ExcCollection) -> Q {
    let rows: Vec<Vec<Q>> = coll.classes.iter().map(|c| c.to_array().to_vec()).collect();
    det(&rows)
}

/// Masses and phases assigned to the members of a collection.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicDatum {
    pub m: [f64; 4],
    pub phi: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaFlags {
    pub in_theta: bool,
    pub in_theta_star: bool,
}

pub fn theta_membership(datum: &AlgebraicDatum) -> ThetaFlags {
    let positive = datum.m.iter().all(|&m| m > 0.0);
    let mut gaps = true;
    for i in 0..4 {
        for j in i + 1..4 {
            let d = (j - i) as f64;
            if datum.phi[j] - datum.phi[i] <= d * (d + 1.0) / 2.0 {
                gaps = false;
            }
        }
    }
    let in_theta = positive && gaps;
    let consecutive = (0..3).all(|i| datum.phi[i + 1] - datum.phi[i] >= 1.0);
    ThetaFlags {
        in_theta,
        in_theta_star: in_theta && consecutive,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCharge {
    pub spec: ChargeSpec<f64>,
    /// Largest `|Z(E_j) − m_j e^{iπφ_j}|`.
    pub residual: f64,
}

/// The charge with `Z(E_j) = m_j e^{iπφ_j}`.
pub fn algebraic_charge(coll: &ExcCollection, datum: &AlgebraicDatum) -> Result<AlgebraicCharge> {
    if basis_determinant(coll).is_nil() {
        return Err(Error::SingularBasis);
    }
    let rows: Vec<Vec<f64>> = coll
        .classes
        .iter()
        .map(|c| vec![c.e3.to_f64(), c.e2.to_f64(), c.e1.to_f64(), c.e0.to_f64()])
        .collect();
    let target = |j: usize| {
        let (s, c) = (std::f64::consts::PI * datum.phi[j]).sin_cos();
        (datum.m[j] * c, datum.m[j] * s)
    };
    let re_rhs: Vec<f64> = (0..4).map(|j| target(j).0).collect();
    let im_rhs: Vec<f64> = (0..4).map(|j| target(j).1).collect();
    let re = solve(&rows, &re_rhs).ok_or(Error::SingularBasis)?;
    let im = solve(&rows, &im_rhs).ok_or(Error::SingularBasis)?;
    let spec = ChargeSpec::from_coeffs(
        std::array::from_fn(|k| re[k]),
        std::array::from_fn(|k| im[k]),
    );
    let residual = (0..4)
        .map(|j| {
            let z = spec.z_eval(&coll.classes[j].to_f64());
            let (tr, ti) = target(j);
            (z.re - tr).hypot(z.im - ti)
        })
        .fold(0.0, f64::max);
    Ok(AlgebraicCharge { spec, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(s: &str) -> ChernVector {
        s.parse().unwrap()
    }

    #[test]
    fn beilinson_classes() {
        let b = beilinson(0);
        assert_eq!(
            b.classes,
            [cv("1,0,0,0"), cv("1,1,1/2,1/6"), cv("1,2,2,4/3"), cv("1,3,9/2,9/2")]
        );
        assert_eq!(basis_determinant(&b), Q::from_i64(1));
    }

    #[test]
    fn mutation_examples() {
        let p3 = VarietyData::p3();
        let l = mutate(&p3, &beilinson(0), 1, Side::Left).unwrap();
        assert_eq!(l.classes[0], cv("3,-1,-1/2,-1/6"));
        assert_eq!(l.classes[1], cv("1,0,0,0"));
        assert_eq!(mutate(&p3, &beilinson(0), 4, Side::Left), Err(Error::BadIndex(4)));
        assert_eq!(mutate(&p3, &beilinson(0), 0, Side::Right), Err(Error::BadIndex(0)));
    }

    #[test]
    fn exceptionality() {
        let p3 = VarietyData::p3();
        for k in -2..=2 {
            assert!(check_exceptional(&p3, &beilinson(k)).unwrap());
        }
        let mut bad = beilinson(0);
        bad.classes = [cv("1,0,0,0"), cv("1,0,0,0"), cv("1,1,1/2,1/6"), cv("1,2,2,4/3")];
        assert!(!check_exceptional(&p3, &bad).unwrap());
        for i in 1..=3 {
            for side in [Side::Left, Side::Right] {
                let m = mutate(&p3, &beilinson(0), i, side).unwrap();
                assert!(check_exceptional(&p3, &m).unwrap(), "{i} {side:?}");
            }
        }
        assert_eq!(
            check_exceptional(&VarietyData::generic(1), &beilinson(0)),
            Err(Error::EulerUnavailable)
        );
    }

    #[test]
    fn left_then_right_is_identity() {
        let p3 = VarietyData::p3();
        for k in -2..=2 {
            for i in 1..=3 {
                let b = beilinson(k);
                let l = mutate(&p3, &b, i, Side::Left).unwrap();
                assert_eq!(mutate(&p3, &l, i, Side::Right).unwrap().classes, b.classes);
            }
        }
    }

    #[test]
    fn theta_examples() {
        let d = |phi: [f64; 4]| AlgebraicDatum { m: [1.0; 4], phi };
        assert_eq!(
            theta_membership(&d([0.0, 1.5, 3.6, 6.1])),
            ThetaFlags { in_theta: true, in_theta_star: true }
        );
        assert!(!theta_membership(&d([0.0, 1.0, 2.0, 3.0])).in_theta);
        assert!(!theta_membership(&d([0.0, 1.2, 2.9, 5.4])).in_theta);
        let shifted = d([1.0, 2.5, 4.6, 7.1]);
        assert_eq!(theta_membership(&shifted), theta_membership(&d([0.0, 1.5, 3.6, 6.1])));
        let mut neg = d([0.0, 1.5, 3.6, 6.1]);
        neg.m[2] = -1.0;
        assert!(!theta_membership(&neg).in_theta);
    }

    #[test]
    fn algebraic_charge_round_trip() {
        let datum = AlgebraicDatum { m: [1.0; 4], phi: [0.1, 1.2, 2.4, 3.7] };
        let c = algebraic_charge(&beilinson(0), &datum).unwrap();
        assert!(c.residual <= 1e-10);
        let mut rep = beilinson(0);
        rep.classes[1] = rep.classes[0].clone();
        assert_eq!(algebraic_charge(&rep, &datum), Err(Error::SingularBasis));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_collection("beilinson:-1").unwrap(), beilinson(-1));
        assert!(parse_collection("foo:1").is_err());
        assert_eq!(parse_mutation("2:left").unwrap(), (2, Side::Left));
        assert!(parse_mutation("2:up").is_err());
    }
}
