//! Bogomolov-type quadratic forms, their restriction to the kernel of a
//! central charge, and the support interval in `K`.

use num_complex::Complex;

use crate::charges::ChargeSpec;
use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::linalg::{bilinear, congruence, kernel, Mat4};
use crate::scalar::{tolerance, Scalar};
use crate::slopes::{nu, Slope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    DeltaBar,
    NablaBar,
    QK,
    SDelta,
    SDeltaEps,
}

/// Scalar knobs of a form; unused ones may be left `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormParams<S> {
    pub k: Option<S>,
    pub delta: Option<S>,
    pub epsilon: Option<S>,
}

impl<S> Default for FormParams<S> {
    fn default() -> Self {
        Self {
            k: None,
            delta: None,
            epsilon: None,
        }
    }
}

/// The `(α, a, b)` part of `Z^{a,b}_{α,β}` entering the `S`-forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeParams<S> {
    pub alpha: S,
    pub a: S,
    pub b: S,
}

/// A symmetric bilinear form on lattice coordinates `(e0, e1, e2, e3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm<S> {
    pub gram: Mat4<S>,
    pub label: String,
}

impl<S: Scalar> QuadForm<S> {
    pub fn eval(&self, v: &ChernVector<S>) -> S {
        let x = v.to_array();
        bilinear(&self.gram, &x, &x)
    }

    pub fn pair(&self, x: &[S; 4], y: &[S; 4]) -> S {
        bilinear(&self.gram, x, y)
    }
}

fn zeros<S: Scalar>() -> Mat4<S> {
    std::array::from_fn(|_| std::array::from_fn(|_| S::zero()))
}

fn add_sym<S: Scalar>(g: &mut Mat4<S>, i: usize, j: usize, coeff: S) {
    if i == j {
        g[i][i] = g[i][i].clone() + coeff;
    } else {
        let h = coeff / S::from_i64(2);
        g[i][j] = g[i][j].clone() + h.clone();
        g[j][i] = g[j][i].clone() + h;
    }
}

/// Rows express `ζ = twist(e, β)` in lattice coordinates.
pub fn twist_matrix<S: Scalar>(beta: &S) -> Mat4<S> {
    let b = beta.clone();
    let b2 = b.clone() * b.clone() / S::from_i64(2);
    let b3 = b2.clone() * b.clone() / S::from_i64(3);
    let (o, z) = (S::one(), S::zero());
    [
        [o.clone(), z.clone(), z.clone(), z.clone()],
        [-b.clone(), o.clone(), z.clone(), z.clone()],
        [b2.clone(), -b.clone(), o.clone(), z.clone()],
        [-b3, b2, -b, o],
    ]
}

fn delta_bar_zeta<S: Scalar>(g: &mut Mat4<S>, scale: S) {
    add_sym(g, 1, 1, scale.clone());
    add_sym(g, 0, 2, -S::from_i64(2) * scale);
}

fn nabla_bar_zeta<S: Scalar>(g: &mut Mat4<S>, scale: S) {
    add_sym(g, 2, 2, S::from_i64(4) * scale.clone());
    add_sym(g, 1, 3, -S::from_i64(6) * scale);
}

/// `K` of the form singled out by the support property at `(α, a)`.
pub fn canonical_k<S: Scalar>(alpha: &S, a: &S) -> S {
    (alpha.clone() * alpha.clone() + S::from_i64(6) * a.clone()) / S::from_i64(2)
}

/// Builds the requested form twisted by `β`.
pub fn quad_form<S: Scalar>(
    which: FormKind,
    beta: &S,
    params: &FormParams<S>,
    charge: Option<&ChargeParams<S>>,
) -> Result<QuadForm<S>> {
    let mut g = zeros::<S>();
    let label;
    match which {
        FormKind::DeltaBar => {
            delta_bar_zeta(&mut g, S::one());
            label = "DeltaBar".to_string();
        }
        FormKind::NablaBar => {
            nabla_bar_zeta(&mut g, S::one());
            label = format!("NablaBar[beta={beta}]");
        }
        FormKind::QK => {
            let k = params.k.clone().ok_or(Error::MissingParam("K"))?;
            delta_bar_zeta(&mut g, k.clone());
            nabla_bar_zeta(&mut g, S::one());
            label = format!("Q[K={k},beta={beta}]");
        }
        FormKind::SDelta | FormKind::SDeltaEps => {
            let c = charge.ok_or(Error::MissingParam("alpha, a, b"))?;
            let delta = params.delta.clone().ok_or(Error::MissingParam("delta"))?;
            if !delta.is_pos() {
                return Err(Error::BadParams("delta must be positive".into()));
            }
            let half_a2 = c.alpha.clone() * c.alpha.clone() / S::from_i64(2);
            let inv = S::one() / delta.clone();
            // δ⁻¹(ζ2 − α²/2 ζ0)²
            add_sym(&mut g, 2, 2, inv.clone());
            add_sym(&mut g, 0, 0, inv.clone() * half_a2.clone() * half_a2.clone());
            add_sym(&mut g, 0, 2, -S::from_i64(2) * inv * half_a2);
            // −ζ1(ζ3 − bζ2 − (a − δ)ζ1)
            add_sym(&mut g, 1, 3, -S::one());
            add_sym(&mut g, 1, 2, c.b.clone());
            add_sym(&mut g, 1, 1, c.a.clone() - delta.clone());
            if which == FormKind::SDeltaEps {
                let eps = params.epsilon.clone().ok_or(Error::MissingParam("epsilon"))?;
                let k = canonical_k(&c.alpha, &c.a);
                delta_bar_zeta(&mut g, eps.clone() * k);
                nabla_bar_zeta(&mut g, eps.clone());
                label = format!("S[delta={delta},eps={eps},beta={beta}]");
            } else {
                label = format!("S[delta={delta},beta={beta}]");
            }
        }
    }
    Ok(QuadForm {
        gram: congruence(&g, &twist_matrix(beta)),
        label,
    })
}

pub fn quad_eval<S: Scalar>(
    which: FormKind,
    v: &ChernVector<S>,
    beta: &S,
    params: &FormParams<S>,
    charge: Option<&ChargeParams<S>>,
) -> Result<S> {
    Ok(quad_form(which, beta, params, charge)?.eval(v))
}

/// `Q_K^β = K Δ̄ + ∇̄^β`.
pub fn q_k<S: Scalar>(k: &S, beta: &S) -> QuadForm<S> {
    let params = FormParams {
        k: Some(k.clone()),
        ..FormParams::default()
    };
    quad_form(FormKind::QK, beta, &params, None).expect("K supplied")
}

/// Evaluates `Q_K^β(v)` without building a Gram matrix.
pub fn q_k_value<S: Scalar>(v: &ChernVector<S>, k: &S, beta: &S) -> S {
    let z = v.twist(beta);
    k.clone() * z.discriminant() + S::from_i64(4) * z.e2.clone() * z.e2.clone()
        - S::from_i64(6) * z.e1 * z.e3
}

#[derive(Debug, Clone, PartialEq)]
pub struct BgReport {
    pub classical: bool,
    /// `None` when `ν_{α,β}(v) ≠ 0`.
    pub generalized: Option<bool>,
    pub bmt_strict: Option<bool>,
}

/// Bogomolov–Gieseker type inequalities at `(α, β)`.
pub fn bg_report<S: Scalar>(v: &ChernVector<S>, alpha: &S, beta: &S) -> BgReport {
    let z = v.twist(beta);
    let classical = !z.discriminant().is_neg();
    let on_wall = matches!(nu(v, alpha, beta), Slope::Finite(ref x) if x.is_nil());
    let a2 = alpha.clone() * alpha.clone();
    let (generalized, bmt_strict) = if on_wall {
        (
            Some(!(z.e3.clone() - a2.clone() / S::from_i64(6) * z.e1.clone()).is_pos()),
            Some((z.e3.clone() - a2 / S::from_i64(2) * z.e1.clone()).is_neg()),
        )
    } else {
        (None, None)
    };
    BgReport {
        classical,
        generalized,
        bmt_strict,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    NegDefinite,
    NegSemiDefinite,
    Indefinite,
    PosSemiDefinite,
    PosDefinite,
}

impl Definiteness {
    pub fn name(self) -> &'static str {
        match self {
            Definiteness::NegDefinite => "NegDefinite",
            Definiteness::NegSemiDefinite => "NegSemiDefinite",
            Definiteness::Indefinite => "Indefinite",
            Definiteness::PosSemiDefinite => "PosSemiDefinite",
            Definiteness::PosDefinite => "PosDefinite",
        }
    }
}

/// Classifies a symmetric 2×2 matrix; a zero matrix counts as negative semidefinite.
///
/// Exact backends use leading minors, `f64` uses eigenvalues with the global tolerance.
pub fn classify2<S: Scalar>(g: &[[S; 2]; 2]) -> Definiteness {
    if S::EXACT {
        let (p, q, r) = (&g[0][0], &g[0][1], &g[1][1]);
        let det = p.clone() * r.clone() - q.clone() * q.clone();
        return match (det.sign(), p.sign(), r.sign()) {
            (std::cmp::Ordering::Less, _, _) => Definiteness::Indefinite,
            (std::cmp::Ordering::Greater, std::cmp::Ordering::Less, _) => Definiteness::NegDefinite,
            (std::cmp::Ordering::Greater, _, _) => Definiteness::PosDefinite,
            (_, p, r) if p.is_lt() || r.is_lt() => Definiteness::NegSemiDefinite,
            (_, p, r) if p.is_gt() || r.is_gt() => Definiteness::PosSemiDefinite,
            _ => Definiteness::NegSemiDefinite,
        };
    }
    let (p, q, r) = (g[0][0].to_f64(), g[0][1].to_f64(), g[1][1].to_f64());
    let mean = (p + r) / 2.0;
    let rad = (((p - r) / 2.0).powi(2) + q * q).sqrt();
    let tol = tolerance() * (1.0f64).max(p.abs() + r.abs() + q.abs());
    let classify = |x: f64| {
        if x > tol {
            1
        } else if x < -tol {
            -1
        } else {
            0
        }
    };
    match (classify(mean - rad), classify(mean + rad)) {
        (-1, -1) => Definiteness::NegDefinite,
        (-1, 1) | (1, -1) => Definiteness::Indefinite,
        (1, 1) => Definiteness::PosDefinite,
        (-1, 0) | (0, -1) | (0, 0) => Definiteness::NegSemiDefinite,
        _ => Definiteness::PosSemiDefinite,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Restricted<S> {
    pub basis: [[S; 4]; 2],
    pub gram2: [[S; 2]; 2],
    pub verdict: Definiteness,
}

/// Gram matrix of `form` on a pair of lattice vectors.
pub fn restrict_to<S: Scalar>(form: &QuadForm<S>, basis: &[[S; 4]; 2]) -> [[S; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| form.pair(&basis[i], &basis[j])))
}

/// Restricts `form` to `Ker Z` on a computed basis.
pub fn kernel_restrict<S: Scalar>(form: &QuadForm<S>, spec: &ChargeSpec<S>) -> Result<Restricted<S>> {
    let rows = spec.rows();
    let k = kernel(&rows);
    if k.len() != 2 {
        return Err(Error::DegenerateKernel);
    }
    let basis: [[S; 4]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| k[i][j].clone()));
    let gram2 = restrict_to(form, &basis);
    let verdict = classify2(&gram2);
    Ok(Restricted {
        basis,
        gram2,
        verdict,
    })
}

/// A basis `(u, w)` of `Ker Z^{a,b}_{α,β}` with `ζ1(u) = 1` and `ζ1(w) = 0`.
pub fn full_kernel_basis<S: Scalar>(alpha: &S, beta: &S, a: &S, b: &S) -> [[S; 4]; 2] {
    let half_a2 = alpha.clone() * alpha.clone() / S::from_i64(2);
    // twisted coordinates (ζ0, ζ1, ζ2, ζ3)
    let u = ChernVector::new(S::zero(), S::one(), S::zero(), a.clone());
    let w = ChernVector::new(S::one(), S::zero(), half_a2.clone(), b.clone() * half_a2);
    let minus = -beta.clone();
    [u.twist(&minus).to_array(), w.twist(&minus).to_array()]
}

/// One end of a support interval; `None` stands for an infinite end.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportInterval {
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub empty: bool,
}

impl SupportInterval {
    pub fn contains(&self, k: f64) -> bool {
        !self.empty
            && self.k_min.is_none_or(|lo| k > lo)
            && self.k_max.is_none_or(|hi| k < hi)
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) > 0.0) == flo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The open set of `K` with `Q_K^β` negative definite on `Ker Z^{a,b}_{α,β}`.
pub fn support_interval<S: Scalar>(alpha: &S, beta: &S, a: &S, b: &S) -> Result<SupportInterval> {
    if !alpha.is_pos() {
        return Err(Error::BadParams("alpha must be positive".into()));
    }
    let basis = full_kernel_basis(alpha, beta, a, b);
    let no_params = FormParams::default();
    let d = restrict_to(&quad_form(FormKind::DeltaBar, beta, &no_params, None)?, &basis);
    let n = restrict_to(&quad_form(FormKind::NablaBar, beta, &no_params, None)?, &basis);
    let d: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| d[i][j].to_f64()));
    let n: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| n[i][j].to_f64()));

    let g11 = |k: f64| k * d[0][0] + n[0][0];
    let det = |k: f64| {
        (k * d[0][0] + n[0][0]) * (k * d[1][1] + n[1][1]) - (k * d[0][1] + n[0][1]).powi(2)
    };
    let negdef = |k: f64| g11(k) < 0.0 && det(k) > 0.0;

    let c2 = d[0][0] * d[1][1] - d[0][1] * d[0][1];
    let c1 = d[0][0] * n[1][1] + n[0][0] * d[1][1] - 2.0 * d[0][1] * n[0][1];
    let c0 = n[0][0] * n[1][1] - n[0][1] * n[0][1];
    let scale = c2.abs() + c1.abs() + c0.abs();

    let mut breaks = Vec::new();
    if d[0][0] != 0.0 {
        breaks.push(-n[0][0] / d[0][0]);
    }
    if c2.abs() > 1e-14 * scale {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let qq = -0.5 * (c1 + c1.signum() * disc.sqrt());
            if qq != 0.0 {
                breaks.push(qq / c2);
                breaks.push(c0 / qq);
            } else {
                breaks.push(0.0);
            }
        }
    } else if c1 != 0.0 {
        breaks.push(-c0 / c1);
    }
    breaks.retain(|x| x.is_finite());
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();

    // ill-conditioned roots are re-located by bisection on the determinant
    let probe = |x: f64| 1.0f64.max(x.abs()) * 1e-6;
    for r in breaks.iter_mut() {
        if det(*r).abs() > 1e-9 * scale.max(1.0) * (1.0 + r.abs()).powi(2) {
            let (lo, hi) = (*r - probe(*r), *r + probe(*r));
            if (det(lo) > 0.0) != (det(hi) > 0.0) {
                *r = bisect(det, lo, hi);
            }
        }
    }

    let mut samples: Vec<(Option<f64>, Option<f64>)> = Vec::new();
    if breaks.is_empty() {
        samples.push((None, None));
    } else {
        samples.push((None, Some(breaks[0])));
        for w in breaks.windows(2) {
            samples.push((Some(w[0]), Some(w[1])));
        }
        samples.push((Some(*breaks.last().unwrap()), None));
    }
    let mut lo: Option<Option<f64>> = None;
    let mut hi: Option<f64> = None;
    for (l, h) in samples {
        let mid = match (l, h) {
            (None, None) => 0.0,
            (None, Some(h)) => h - 1.0 - h.abs(),
            (Some(l), None) => l + 1.0 + l.abs(),
            (Some(l), Some(h)) => 0.5 * (l + h),
        };
        if negdef(mid) {
            if lo.is_none() {
                lo = Some(l);
            }
            hi = h;
        }
    }
    Ok(match lo {
        None => SupportInterval {
            k_min: None,
            k_max: None,
            empty: true,
        },
        Some(l) => SupportInterval {
            k_min: l,
            k_max: hi,
            empty: false,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSearch<S> {
    /// First grid value `2^{-k}` that works.
    pub epsilon: S,
    pub exponent: u32,
    /// How many of the grid values work.
    pub passing: usize,
}

pub const EPSILON_GRID: u32 = 40;

/// Searches `ε ∈ {2⁻¹, …, 2⁻⁴⁰}` with `S_{δ,ε}` negative definite on
/// `Ker Z` away from the line `ζ1 = 0`, where it vanishes to first order.
pub fn find_epsilon<S: Scalar>(
    delta: &S,
    alpha: &S,
    beta: &S,
    a: &S,
    b: &S,
    psi_bound: &S,
) -> Result<EpsilonSearch<S>> {
    if !delta.is_pos() || !(a.clone() - psi_bound.clone() - delta.clone()).is_pos() {
        return Err(Error::Failure(format!(
            "delta = {delta} outside (0, a - psi) = (0, {})",
            a.clone() - psi_bound.clone()
        )));
    }
    let [u, w] = full_kernel_basis(alpha, beta, a, b);
    let q = q_k(&canonical_k(alpha, a), beta);
    let (quu, quw, qww) = (q.pair(&u, &u), q.pair(&u, &w), q.pair(&w, &w));
    let passes = |eps: &S| -> bool {
        let m11 = eps.clone() * quu.clone() - delta.clone();
        if qww.is_neg() {
            let det = m11 * eps.clone() * qww.clone() - eps.clone() * eps.clone() * quw.clone() * quw.clone();
            det.is_pos()
        } else {
            qww.is_nil() && quw.is_nil() && m11.is_neg()
        }
    };
    let mut first = None;
    let mut passing = 0;
    let mut eps = S::one();
    for k in 1..=EPSILON_GRID {
        eps = eps / S::from_i64(2);
        if passes(&eps) {
            passing += 1;
            if first.is_none() {
                first = Some((eps.clone(), k));
            }
        }
    }
    match first {
        Some((epsilon, exponent)) => Ok(EpsilonSearch {
            epsilon,
            exponent,
            passing,
        }),
        None => Err(Error::Failure("no epsilon on the grid works".into())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImZPrime<S> {
    pub value: S,
    pub expansion: S,
    pub expansion_ok: bool,
}

/// `Im(Z′ Z̄)` for the path `t ↦ Z^{a,b}_{α,β−tc}` at `t = 0`, with its
/// closed expansion in twisted coordinates.
pub fn im_zprime_zbar<S: Scalar>(
    v: &ChernVector<S>,
    alpha: &S,
    beta: &S,
    a: &S,
    b: &S,
    c: &S,
) -> Result<ImZPrime<S>> {
    if c.is_neg() {
        return Err(Error::BadParams("c must be nonnegative".into()));
    }
    let z = ChargeSpec::full(alpha.clone(), beta.clone(), a.clone(), b.clone()).z_eval(v);
    let t = v.twist(beta);
    let (z0, z1, z2, z3) = (t.e0, t.e1, t.e2, t.e3);
    // d/dt of the twisted coordinates is c·(0, ζ0, ζ1, ζ2)
    let dz = Complex::new(
        c.clone() * (-z2.clone() + b.clone() * z1.clone() + a.clone() * z0.clone()),
        c.clone() * z1.clone(),
    );
    let value = dz.im * z.re - dz.re * z.im;
    let a2 = alpha.clone() * alpha.clone();
    let half = S::half();
    let expansion = c.clone()
        * (z2.clone() * z2.clone()
            - (a.clone() + a2.clone() * half.clone()) * z0.clone() * z2.clone()
            + a2.clone() * half.clone() * b.clone() * z0.clone() * z1.clone()
            + a2 * half * a.clone() * z0.clone() * z0
            - z1.clone() * z3
            + a.clone() * z1.clone() * z1);
    let expansion_ok = (value.clone() - expansion.clone()).is_nil();
    Ok(ImZPrime {
        value,
        expansion,
        expansion_ok,
    })
}
