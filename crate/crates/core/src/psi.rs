//! Estimates of `Ψ`, the supremum of `(ζ3 − bζ2)/ζ1` over tilt-semistable
//! classes of tilt slope zero, and the regions of parameter space it cuts out.
//!
//! On ℙ³ the closed form `α²/6 + α|b|/2` is known at integral `(α, β)`. The
//! lower bound comes from witness objects; the upper bound maximizes over
//! every lattice class in a box that satisfies the Bogomolov–Gieseker type
//! inequalities, so it is a feasibility bound rather than a bound realized
//! by actual semistable objects.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::quadforms::q_k_value;
use crate::scalar::{Scalar, Q};
use crate::slopes::{nu, Slope};
use crate::witnesses::{make_witness, WitnessKind, WitnessObject};

#[derive(Debug, Clone, PartialEq)]
pub struct XiBound<S> {
    pub mid: S,
    pub xi: S,
    /// Range of `ζ2/ζ1` allowed at this slope.
    pub window: (f64, f64),
}

/// Bounds at slope `nu`, where `nu = (ζ2 − α²ζ0/2)/ζ1` is the tilt slope scaled by `α`.
pub fn xi_bound<S: Scalar>(alpha: &S, b: &S, nu: &S) -> XiBound<S> {
    let a2 = alpha.clone() * alpha.clone();
    let base = a2 / S::from_i64(6);
    let lin = S::from_ratio(2, 3) * nu.clone() - b.clone();
    let shift = nu.clone() + alpha.clone() / S::from_i64(2);
    let mid = base.clone() + lin.abs_val() * shift.clone();
    let xi = base + (lin.clone() * lin + shift.clone() * shift) / S::from_i64(2);
    let (n, a) = (nu.to_f64(), alpha.to_f64());
    let r = (n * n + a * a).sqrt();
    XiBound {
        mid,
        xi,
        window: ((n - r) / 2.0, (n + r) / 2.0),
    }
}

/// Maximum of the `mid` bound for scaled slopes in `[−h, h]`.
pub fn mid_bound_max(alpha: f64, b: f64, h: f64) -> f64 {
    let mid = |n: f64| alpha * alpha / 6.0 + (2.0 * n / 3.0 - b).abs() * (n + alpha / 2.0);
    let mut cands = vec![-h, h, 1.5 * b, (3.0 * b - alpha) / 4.0];
    cands.retain(|&x| x >= -h && x <= h);
    cands.into_iter().map(mid).fold(f64::NEG_INFINITY, f64::max)
}

/// `α²/6 + α|b|/2`.
pub fn psi_closed_form<S: Scalar>(alpha: &S, b: &S) -> S {
    alpha.clone() * alpha.clone() / S::from_i64(6) + alpha.clone() * b.abs_val() / S::from_i64(2)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PsiOptions {
    /// Also try Steiner bundles and their dual twists as lower-bound witnesses.
    pub steiner: bool,
    /// Also try semi-homogeneous classes (meaningful on abelian threefolds).
    pub semi_homogeneous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiEstimate<S> {
    pub closed_form: S,
    /// `None` when no witness qualifies.
    pub lower: Option<S>,
    pub upper: Option<S>,
    pub lower_witness: Option<WitnessObject>,
    pub upper_witness: Option<ChernVector<Q>>,
    pub nu_window: S,
    pub box_bound: u32,
    /// Largest `mid` bound over the slope window.
    pub mid_bound: f64,
}

fn objective<S: Scalar>(z: &ChernVector<S>, b: &S) -> S {
    (z.e3.clone() - b.clone() * z.e2.clone()) / z.e1.clone()
}

fn bg_feasible<S: Scalar>(v: &ChernVector<S>, a2: &S, beta: &S) -> bool {
    !v.discriminant().is_neg() && !q_k_value(v, a2, beta).is_neg()
}

fn in_window<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S, w: &S) -> bool {
    match nu(v, alpha, beta) {
        Slope::Finite(x) => (x.abs_val() - w.clone()).is_neg(),
        Slope::PosInf => false,
    }
}

fn witness_pool(beta: f64, n: i64, opts: PsiOptions) -> Vec<WitnessObject> {
    let mut kinds = Vec::new();
    let (lo, hi) = (beta.floor() as i64 - n, beta.ceil() as i64 + n);
    kinds.extend((lo..=hi).map(WitnessKind::LineBundle));
    if opts.steiner {
        for t in 1..=n {
            for r in 1..=n {
                kinds.push(WitnessKind::Steiner { t, r });
                kinds.push(WitnessKind::SteinerDualTwist { t, r });
            }
        }
    }
    if opts.semi_homogeneous {
        for q in 1..=n {
            for p in (lo * q)..=(hi * q) {
                kinds.push(WitnessKind::SemiHomog { p, q, r0: 1 });
            }
        }
    }
    let mut out = Vec::new();
    for k in kinds {
        let w = make_witness(k).expect("pool parameters are valid");
        if !w.slope_stable {
            continue;
        }
        out.push(w.clone());
        out.push(w.shifted(1));
    }
    out
}

fn int_of<S: Scalar>(x: &S) -> Option<i64> {
    let f = x.floor_i64();
    (x.clone() - S::from_i64(f)).is_nil().then_some(f)
}

fn better<S: Scalar>(cand: &(S, [i64; 4]), cur: &(S, [i64; 4])) -> bool {
    match cand.0.cmp_to(&cur.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => cand.1 < cur.1,
    }
}

/// Best class over the box for one value of `e0`.
fn upper_for_e0<S: Scalar>(e0: i64, alpha: &S, beta: &S, b: &S, n: i64, w: &S) -> Option<(S, [i64; 4])> {
    let two = S::from_i64(2);
    let six = S::from_i64(6);
    let a2 = alpha.clone() * alpha.clone();
    let e0s = S::from_i64(e0);
    let be0 = beta.clone() * e0s.clone();
    let mut best: Option<(S, [i64; 4])> = None;
    for e1 in (be0.floor_i64() + 1)..=(be0.clone() + S::from_i64(n)).floor_i64() {
        let e1s = S::from_i64(e1);
        let z1 = e1s.clone() - be0.clone();
        let center = a2.clone() / two.clone() * e0s.clone();
        let radius = w.clone() * alpha.clone() * z1.clone();
        let offset = beta.clone() * e1s.clone() - beta.clone() * beta.clone() / two.clone() * e0s.clone();
        let lo = (two.clone() * (center.clone() - radius.clone() + offset.clone())).floor_i64() + 1;
        let hi = (two.clone() * (center + radius + offset)).ceil_i64() - 1;
        for m in lo..=hi {
            let e2 = S::from_ratio(m, 2);
            let partial = ChernVector::new(e0s.clone(), e1s.clone(), e2.clone(), S::zero());
            if partial.discriminant().is_neg() || !in_window(&partial, alpha, beta, w) {
                continue;
            }
            let z = partial.twist(beta);
            // largest ζ3 allowed by α²Δ̄ + 4ζ2² − 6ζ1ζ3 ≥ 0
            let z3_max = (a2.clone() * z.discriminant() + S::from_i64(4) * z.e2.clone() * z.e2.clone())
                / (six.clone() * z1.clone());
            let k = (six.clone() * (z3_max - z.e3.clone())).floor_i64();
            let v = ChernVector::new(e0s.clone(), e1s.clone(), e2.clone(), S::from_ratio(k, 6));
            let obj = objective(&v.twist(beta), b);
            let cand = (obj, [e0, e1, m, k]);
            if best.as_ref().is_none_or(|cur| better(&cand, cur)) {
                best = Some(cand);
            }
        }
    }
    best
}

/// Brackets `Ψ(α, β, b)` using slopes `|ν| < nu_window` and the box
/// `|e0| ≤ N`, `0 < ζ1 ≤ N`.
pub fn psi_estimate<S: Scalar>(
    alpha: &S,
    beta: &S,
    b: &S,
    box_bound: u32,
    nu_window: &S,
    opts: PsiOptions,
) -> Result<PsiEstimate<S>> {
    if !alpha.is_pos() || box_bound == 0 || !nu_window.is_pos() {
        return Err(Error::BadParams("need alpha > 0, box >= 1, window > 0".into()));
    }
    let n = box_bound as i64;
    let a2 = alpha.clone() * alpha.clone();

    let mut lower: Option<(S, WitnessObject)> = None;
    for w in witness_pool(beta.to_f64(), n, opts) {
        let c = w.class().map(S::from_q);
        let z = c.twist(beta);
        if !z.e1.is_pos() || !in_window(&c, alpha, beta, nu_window) || !bg_feasible(&c, &a2, beta) {
            continue;
        }
        let obj = objective(&z, b);
        if lower.as_ref().is_none_or(|(cur, _)| obj.cmp_to(cur) == Ordering::Greater) {
            lower = Some((obj, w));
        }
    }

    let upper = (-n..=n)
        .into_par_iter()
        .filter_map(|e0| upper_for_e0(e0, alpha, beta, b, n, nu_window))
        .reduce_with(|x, y| if better(&y, &x) { y } else { x });

    if lower.is_none() && upper.is_none() {
        return Err(Error::EmptyBox);
    }
    let (lower, lower_witness) = match lower {
        Some((v, w)) => (Some(v), Some(w)),
        None => (None, None),
    };
    let (upper, upper_witness) = match upper {
        Some((v, t)) => (Some(v), Some(ChernVector::from_lattice(t))),
        None => (None, None),
    };
    let af = alpha.to_f64();
    Ok(PsiEstimate {
        closed_form: psi_closed_form(alpha, b),
        lower,
        upper,
        lower_witness,
        upper_witness,
        nu_window: nu_window.clone(),
        box_bound,
        mid_bound: mid_bound_max(af, b.to_f64(), af * nu_window.to_f64()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Undecided,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Tri::Yes => Some(true),
            Tri::No => Some(false),
            Tri::Undecided => None,
        }
    }
}

/// Which value stands in for `Ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiProxy {
    ClosedForm,
    Bracket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionFlags {
    pub in_b: bool,
    pub in_b_psi: Tri,
    pub in_b_star_psi: Tri,
}

/// Decides `a > Ψ` against the proxy.
fn above_psi<S: Scalar>(a: &S, psi: &PsiEstimate<S>, proxy: PsiProxy) -> Tri {
    match proxy {
        PsiProxy::ClosedForm => Tri::from_bool((a.clone() - psi.closed_form.clone()).is_pos()),
        PsiProxy::Bracket => {
            if psi.upper.as_ref().is_none_or(|u| (a.clone() - u.clone()).is_pos()) {
                Tri::Yes
            } else if psi.lower.as_ref().is_some_and(|l| !(a.clone() - l.clone()).is_pos()) {
                Tri::No
            } else {
                Tri::Undecided
            }
        }
    }
}

pub fn region_membership<S: Scalar>(
    alpha: &S,
    a: &S,
    b: &S,
    psi: &PsiEstimate<S>,
    proxy: PsiProxy,
) -> RegionFlags {
    let in_b = (a.clone() - psi_closed_form(alpha, b)).is_pos();
    let star = above_psi(a, psi, proxy);
    let floor = alpha.clone() * alpha.clone() / S::from_i64(6);
    let in_b_psi = if (a.clone() - floor).is_pos() { star } else { Tri::No };
    RegionFlags {
        in_b,
        in_b_psi,
        in_b_star_psi: star,
    }
}

/// Lattice classes with `ζ1 > 0` in the kernel of `Z^{a,b}_{α,β}` that satisfy
/// the Bogomolov–Gieseker type inequalities, sorted by `(e0, e1, 2e2, 6e3)`.
pub fn boundary_witness_search<S: Scalar>(
    alpha: &S,
    beta: &S,
    a: &S,
    b: &S,
    box_bound: u32,
) -> Vec<ChernVector<Q>> {
    let n = box_bound as i64;
    let two = S::from_i64(2);
    let a2 = alpha.clone() * alpha.clone();
    let mut found: Vec<[i64; 4]> = (-n..=n)
        .into_par_iter()
        .flat_map_iter(|e0| {
            let mut out = Vec::new();
            let e0s = S::from_i64(e0);
            let be0 = beta.clone() * e0s.clone();
            for e1 in (be0.floor_i64() + 1)..=(be0.clone() + S::from_i64(n)).floor_i64() {
                let e1s = S::from_i64(e1);
                // Im Z = 0 fixes ζ2, Re Z = 0 fixes ζ3
                let z1 = e1s.clone() - be0.clone();
                let z2 = a2.clone() / two.clone() * e0s.clone();
                let z3 = b.clone() * z2.clone() + a.clone() * z1.clone();
                let zeta = ChernVector::new(e0s.clone(), z1, z2, z3);
                let v = zeta.twist(&-beta.clone());
                let (Some(m), Some(k)) = (
                    int_of(&(two.clone() * v.e2.clone())),
                    int_of(&(S::from_i64(6) * v.e3.clone())),
                ) else {
                    continue;
                };
                let exact = ChernVector::new(e0s.clone(), e1s, S::from_ratio(m, 2), S::from_ratio(k, 6));
                if bg_feasible(&exact, &a2, beta) {
                    out.push([e0, e1, m, k]);
                }
            }
            out
        })
        .collect();
    found.sort();
    found.into_iter().map(ChernVector::from_lattice).collect()
}
