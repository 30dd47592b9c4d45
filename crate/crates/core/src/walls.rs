//! Numerical walls for tilt stability.
//!
//! A wall here is the locus where two classes have equal tilt slope `ν_{α,β}`.
//! These are necessary-condition loci only: nothing below certifies that a
//! subobject with the given class exists.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::slopes::{nu, trichotomy, Slope, Trichotomy};

/// `P(β, α²) = c + b1·β + b2·β² + a2·α²`.
///
/// Cross-multiplying the slopes also produces `β³` and `α²β` terms, but they
/// cancel identically, so the polynomial is stored in this reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallPoly<S = Q> {
    pub c: S,
    pub b1: S,
    pub b2: S,
    pub a2: S,
}

impl<S: Scalar> WallPoly<S> {
    pub fn eval(&self, beta: &S, alpha: &S) -> S {
        self.c.clone()
            + self.b1.clone() * beta.clone()
            + self.b2.clone() * beta.clone() * beta.clone()
            + self.a2.clone() * alpha.clone() * alpha.clone()
    }

    pub fn is_zero(&self) -> bool {
        [&self.c, &self.b1, &self.b2, &self.a2].iter().all(|x| x.is_nil())
    }

    /// `α²` on the wall above `beta`; `None` when the wall is vertical there.
    pub fn alpha_sq_at(&self, beta: &S) -> Option<S> {
        if self.a2.is_nil() {
            return None;
        }
        let rest = self.c.clone() + self.b1.clone() * beta.clone() + self.b2.clone() * beta.clone() * beta.clone();
        Some(-rest / self.a2.clone())
    }

    /// Center and squared radius when the wall is a semicircle `(β − c)² + α² = r²`.
    pub fn circle(&self) -> Option<(S, S)> {
        if self.a2.is_nil() || (self.b2.clone() - self.a2.clone()).sign() != Ordering::Equal {
            return None;
        }
        let center = -self.b1.clone() / (S::from_i64(2) * self.a2.clone());
        let r2 = center.clone() * center.clone() - self.c.clone() / self.a2.clone();
        Some((center, r2))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallCurve {
    pub v: ChernVector<Q>,
    pub w: ChernVector<Q>,
    pub poly: WallPoly<Q>,
    /// Set when the `(e0, e1, e2)` truncations are proportional.
    pub identically_zero: bool,
}

fn numerator_coeffs(u: &ChernVector<Q>) -> [Q; 4] {
    // ζ2 − α²ζ0/2 over {1, β, β², α²}
    let h = Q::half();
    [u.e2.clone(), -u.e1.clone(), u.e0.clone() * h.clone(), -(u.e0.clone() * h)]
}

pub fn wall_conic(v: &ChernVector<Q>, w: &ChernVector<Q>) -> WallCurve {
    // n_u · ζ1(u') with ζ1(u') = e1' − β e0'
    let cross = |n: [Q; 4], d: &ChernVector<Q>| -> [Q; 4] {
        let (d0, d1) = (d.e1.clone(), -d.e0.clone());
        [
            n[0].clone() * d0.clone(),
            n[0].clone() * d1.clone() + n[1].clone() * d0.clone(),
            n[1].clone() * d1 + n[2].clone() * d0.clone(),
            n[3].clone() * d0,
        ]
    };
    let left = cross(numerator_coeffs(v), w);
    let right = cross(numerator_coeffs(w), v);
    let [c, b1, b2, a2] = std::array::from_fn(|i| left[i].clone() - right[i].clone());
    let poly = WallPoly { c, b1, b2, a2 };
    let identically_zero = poly.is_zero();
    WallCurve {
        v: v.clone(),
        w: w.clone(),
        poly,
        identically_zero,
    }
}

impl WallCurve {
    /// Points `(β, α)` with `α > 0` on the wall, for `n` evenly spaced `β`
    /// in `[lo, hi]`. Vertical walls are sampled along `α` instead.
    pub fn sample(&self, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        if self.identically_zero || n == 0 {
            return Vec::new();
        }
        let p = WallPoly {
            c: self.poly.c.to_f64(),
            b1: self.poly.b1.to_f64(),
            b2: self.poly.b2.to_f64(),
            a2: self.poly.a2.to_f64(),
        };
        let step = |i: usize, a: f64, b: f64| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
        let mut out = Vec::new();
        if self.poly.a2.is_nil() {
            let top = (hi - lo).abs().max(1.0);
            // a vertical wall sits where ζ1 of both classes vanishes, so both slopes are +∞
            for beta in vertical_roots(&p).into_iter().filter(|b| *b >= lo && *b <= hi) {
                out.extend((1..=n).map(|i| (beta, top * i as f64 / n as f64)));
            }
            return out;
        }
        for i in 0..n {
            let beta = step(i, lo, hi);
            if let Some(a2) = p.alpha_sq_at(&beta) {
                if a2 > 0.0 && self.both_finite(beta, a2.sqrt()) {
                    out.push((beta, a2.sqrt()));
                }
            }
        }
        out
    }

    fn both_finite(&self, beta: f64, alpha: f64) -> bool {
        let finite = |u: &ChernVector<Q>| !nu(&u.to_f64(), &alpha, &beta).is_inf();
        finite(&self.v) && finite(&self.w)
    }
}

fn vertical_roots(p: &WallPoly<f64>) -> Vec<f64> {
    if p.b2.abs() <= f64::EPSILON {
        return if p.b1.abs() <= f64::EPSILON { Vec::new() } else { vec![-p.c / p.b1] };
    }
    let disc = p.b1 * p.b1 - 4.0 * p.b2 * p.c;
    if disc < 0.0 {
        return Vec::new();
    }
    let r = disc.sqrt();
    let mut roots = vec![(-p.b1 - r) / (2.0 * p.b2), (-p.b1 + r) / (2.0 * p.b2)];
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Whether a class with unknown `e3` can pass the trichotomy test.
fn truncation_admissible<S: Scalar>(u: &ChernVector<S>, alpha: &S, beta: &S) -> bool {
    match trichotomy(u, alpha, beta) {
        Trichotomy::PositiveCh1 | Trichotomy::Ch1ZeroImPositive | Trichotomy::Ch1ZeroImZeroReNeg => true,
        Trichotomy::Violates => {
            let z = u.twist(beta);
            if !z.e1.is_nil() {
                return false;
            }
            // Im vanishes: a suitable e3 makes Re negative
            let im = z.e2 - alpha.clone() * alpha.clone() / S::from_i64(6) * z.e0;
            im.is_nil()
        }
    }
}

/// Lattice classes `w` with `|e0|, |e1|, |2e2| ≤ box_bound` that pass the
/// numerical conditions for destabilizing `v` at `(α, β)`. `e3` does not
/// enter the conditions and is reported as zero. Results are sorted by
/// `(e0, e1, 2e2)`.
pub fn destabilizer_search<S: Scalar>(
    v: &ChernVector<Q>,
    alpha: &S,
    beta: &S,
    box_bound: u32,
) -> Result<Vec<ChernVector<Q>>> {
    let vs = v.map(S::from_q);
    if trichotomy(&vs, alpha, beta) != Trichotomy::PositiveCh1 {
        return Err(Error::BadInput("destabilizer search needs ch1^beta > 0".into()));
    }
    let n = box_bound as i64;
    let vt = ChernVector::new(vs.e0.clone(), vs.e1.clone(), vs.e2.clone(), S::zero());
    let z1v = vs.twist(beta).e1;
    let nu_v = nu(&vs, alpha, beta);
    let mut found: Vec<[i64; 3]> = (-n..=n)
        .into_par_iter()
        .flat_map_iter(|e0| {
            let mut out = Vec::new();
            for e1 in -n..=n {
                for m in -n..=n {
                    let w = ChernVector::new(S::from_i64(e0), S::from_i64(e1), S::from_ratio(m, 2), S::zero());
                    let rest = vt.clone() - w.clone();
                    if w.is_zero() || rest.is_zero() {
                        continue;
                    }
                    let z1 = w.twist(beta).e1;
                    if z1.is_neg() || (z1 - z1v.clone()).is_pos() {
                        continue;
                    }
                    if nu(&w, alpha, beta).cmp_slope(&nu_v) != Ordering::Greater {
                        continue;
                    }
                    if w.discriminant().is_neg() || rest.discriminant().is_neg() {
                        continue;
                    }
                    if truncation_admissible(&w, alpha, beta) && truncation_admissible(&rest, alpha, beta) {
                        out.push([e0, e1, m]);
                    }
                }
            }
            out
        })
        .collect();
    found.sort();
    Ok(found
        .into_iter()
        .map(|[e0, e1, m]| ChernVector::from_lattice([e0, e1, m, 0]))
        .collect())
}

/// Sort key for the large-`a` behavior of `ρ^{a,b}_{α,β}`: `+∞` when the
/// imaginary part vanishes, otherwise the coefficient of `a` followed by the
/// constant term.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoKey<S> {
    Finite { lead: S, constant: S },
    PosInf,
}

pub fn rho_key<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S, b: &S) -> RhoKey<S> {
    let z = v.twist(beta);
    let im = z.e2.clone() - alpha.clone() * alpha.clone() / S::from_i64(2) * z.e0.clone();
    if im.is_nil() {
        return RhoKey::PosInf;
    }
    RhoKey::Finite {
        lead: -z.e1.clone() / im.clone(),
        constant: (z.e3 - b.clone() * z.e2) / im,
    }
}

/// Orders `ρ(v)` against `ρ(w)` as `a → ∞`.
pub fn rho_compare<S: Scalar>(v: &ChernVector<S>, w: &ChernVector<S>, alpha: &S, beta: &S, b: &S) -> Ordering {
    match (rho_key(v, alpha, beta, b), rho_key(w, alpha, beta, b)) {
        (RhoKey::PosInf, RhoKey::PosInf) => Ordering::Equal,
        (RhoKey::PosInf, _) => Ordering::Greater,
        (_, RhoKey::PosInf) => Ordering::Less,
        (RhoKey::Finite { lead: l1, constant: c1 }, RhoKey::Finite { lead: l2, constant: c2 }) => {
            l1.cmp_to(&l2).then_with(|| c1.cmp_to(&c2))
        }
    }
}

/// `ρ^{a,b}_{α,β}(v) = −Re Z / Im Z` at finite `a`.
pub fn rho_at<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S, a: &S, b: &S) -> Slope<S> {
    match rho_key(v, alpha, beta, b) {
        RhoKey::PosInf => Slope::PosInf,
        RhoKey::Finite { lead, constant } => Slope::Finite(a.clone() * lead + constant),
    }
}
