//! Classes with known stability provenance, their Ext groups, and the
//! phase scans built on them.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::charges::{phase, ChargeSpec};
use crate::chern::ChernVector;
use crate::error::{Error, ParseError, Result};
use crate::exceptional::{AlgebraicDatum, ExcCollection};
use crate::quadforms::im_zprime_zbar;
use crate::scalar::{tolerance, Scalar, Q};
use crate::slopes::{mu, nu, Slope};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    LineBundle(i64),
    Skyscraper,
    /// Cokernel of a general map `O(−1)^t → O^{r+t}`.
    Steiner { t: i64, r: i64 },
    /// `𝔻(E) ⊗ O(1)` for a Steiner bundle `E`.
    SteinerDualTwist { t: i64, r: i64 },
    /// Rank `r0` bundle with `ch = r0·e^{(p/q)H}`.
    SemiHomog { p: i64, q: i64, r0: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessObject {
    pub kind: WitnessKind,
    /// Class of the unshifted object.
    pub v: ChernVector<Q>,
    pub shift: i64,
    pub stable_hint: String,
    /// Whether the provenance asserts slope stability.
    pub slope_stable: bool,
}

/// `r < (1+√3)t`, decided exactly.
pub fn steiner_stable(t: i64, r: i64) -> bool {
    let d = r - t;
    d < 0 || d * d < 3 * t * t
}

pub fn make_witness(kind: WitnessKind) -> Result<WitnessObject> {
    let bad = |m: &str| Err(Error::BadParams(m.to_string()));
    let (v, hint, stable) = match &kind {
        WitnessKind::LineBundle(d) => (
            ChernVector::line_bundle(*d),
            "line bundle: stable for every geometric stability condition".to_string(),
            true,
        ),
        WitnessKind::Skyscraper => (
            ChernVector::skyscraper(),
            "skyscraper: stable of phase 1 for every geometric stability condition".to_string(),
            true,
        ),
        WitnessKind::Steiner { t, r } | WitnessKind::SteinerDualTwist { t, r } => {
            if *t < 1 || *r < 1 {
                return bad("Steiner parameters need t, r >= 1");
            }
            let base = ChernVector::new(
                Q::from_i64(*r),
                Q::from_i64(*t),
                Q::from_ratio(-t, 2),
                Q::from_ratio(*t, 6),
            );
            let stable = steiner_stable(*t, *r);
            let v = if matches!(kind, WitnessKind::Steiner { .. }) {
                base
            } else {
                base.dual().tensor_line(1)
            };
            (v, "slope stable iff r < (1+sqrt3) t".to_string(), stable)
        }
        WitnessKind::SemiHomog { p, q, r0 } => {
            if *q < 1 || *r0 < 1 {
                return bad("semi-homogeneous parameters need q, r0 >= 1");
            }
            let s = Q::from_ratio(*p, *q);
            (
                ChernVector::<Q>::line_bundle_at(s).scale(&Q::from_i64(*r0)),
                "semi-homogeneous: stable for every geometric stability condition".to_string(),
                true,
            )
        }
    };
    Ok(WitnessObject {
        kind,
        v,
        shift: 0,
        stable_hint: hint,
        slope_stable: stable,
    })
}

impl WitnessObject {
    pub fn shifted(mut self, k: i64) -> Self {
        self.shift += k;
        self
    }

    /// Class of the shifted object.
    pub fn class(&self) -> ChernVector<Q> {
        if self.shift.rem_euclid(2) == 0 {
            self.v.clone()
        } else {
            -self.v.clone()
        }
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            WitnessKind::LineBundle(d) => format!("O({d})"),
            WitnessKind::Skyscraper => "O_x".to_string(),
            WitnessKind::Steiner { t, r } => format!("Steiner({t},{r})"),
            WitnessKind::SteinerDualTwist { t, r } => format!("SteinerDual({t},{r})"),
            WitnessKind::SemiHomog { p, q, r0 } => format!("SemiHomog({p}/{q},{r0})"),
        };
        if self.shift == 0 {
            base
        } else {
            format!("{base}[{}]", self.shift)
        }
    }
}

impl fmt::Display for WitnessObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn ints(s: &str, n: usize, text: &str) -> std::result::Result<Vec<i64>, ParseError> {
    let v: std::result::Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse()).collect();
    match v {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(ParseError::Witness(text.to_string())),
    }
}

/// Parses `kind:params[shift]`, e.g. `line:-1[1]`, `point`, `steiner:1,2`.
impl std::str::FromStr for WitnessObject {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let err = || ParseError::Witness(text.to_string());
        let s = text.trim();
        let (body, shift) = match s.strip_suffix(']') {
            Some(rest) => {
                let (b, k) = rest.rsplit_once('[').ok_or_else(err)?;
                (b, k.trim().parse::<i64>().map_err(|_| err())?)
            }
            None => (s, 0),
        };
        let (kind, params) = body.split_once(':').unwrap_or((body, ""));
        let kind = match kind.trim() {
            "line" | "O" => WitnessKind::LineBundle(ints(params, 1, text)?[0]),
            "point" | "skyscraper" => WitnessKind::Skyscraper,
            "steiner" => {
                let v = ints(params, 2, text)?;
                WitnessKind::Steiner { t: v[0], r: v[1] }
            }
            "steiner-dual" => {
                let v = ints(params, 2, text)?;
                WitnessKind::SteinerDualTwist { t: v[0], r: v[1] }
            }
            "semihom" => {
                let v = ints(params, 3, text)?;
                WitnessKind::SemiHomog { p: v[0], q: v[1], r0: v[2] }
            }
            _ => return Err(err()),
        };
        Ok(make_witness(kind).map_err(|_| err())?.shifted(shift))
    }
}

/// Reads a corpus: one witness per line, `#` starts a comment.
pub fn parse_corpus(text: &str) -> std::result::Result<Vec<WitnessObject>, ParseError> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

/// Line bundles `O(−5) … O(5)` and a skyscraper.
pub fn default_corpus() -> Vec<WitnessObject> {
    let mut out: Vec<WitnessObject> = (-5..=5)
        .map(|d| make_witness(WitnessKind::LineBundle(d)).expect("valid"))
        .collect();
    out.push(make_witness(WitnessKind::Skyscraper).expect("valid"));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomFact {
    pub source: WitnessObject,
    pub target: WitnessObject,
    /// Degrees `i` with `Ext^i(source, target) ≠ 0`, ignoring shifts.
    pub degrees: BTreeSet<i64>,
}

pub fn hom_facts(a: &WitnessObject, b: &WitnessObject) -> Result<HomFact> {
    use WitnessKind::*;
    let degrees: BTreeSet<i64> = match (&a.kind, &b.kind) {
        (LineBundle(p), LineBundle(q)) => {
            let mut s = BTreeSet::new();
            if q >= p {
                s.insert(0);
            }
            if *q <= p - 4 {
                s.insert(3);
            }
            s
        }
        (LineBundle(_), Skyscraper) => [0].into(),
        (Skyscraper, LineBundle(_)) => [3].into(),
        (Skyscraper, Skyscraper) => [0, 1, 2, 3].into(),
        _ => return Err(Error::UnsupportedPair(format!("{} -> {}", a.name(), b.name()))),
    };
    Ok(HomFact {
        source: a.clone(),
        target: b.clone(),
        degrees,
    })
}

/// Where witness phases come from.
#[derive(Debug, Clone, Copy)]
pub enum PhaseModel<'a> {
    /// `σ^{a,b}_{α,β}` with line bundles and skyscrapers taken as stable.
    Geometric { alpha: f64, beta: f64, a: f64, b: f64 },
    /// The algebraic condition attached to a collection; only its members get phases.
    Algebraic {
        coll: &'a ExcCollection,
        datum: &'a AlgebraicDatum,
    },
}

/// Phase of the unshifted class in the double-tilted heart of `σ^{a,b}_{α,β}`.
pub fn geometric_phase(v: &ChernVector<Q>, alpha: f64, beta: f64, a: f64, b: f64) -> Result<f64> {
    let vf = v.to_f64();
    let s1 = match mu(&vf, &beta) {
        Slope::PosInf => 0,
        Slope::Finite(m) if m > 0.0 => 0,
        _ => 1,
    };
    let f = if s1 == 0 { vf.clone() } else { -vf.clone() };
    let s2 = match nu(&f, &alpha, &beta) {
        Slope::PosInf => 0,
        Slope::Finite(x) if x > 0.0 => 0,
        _ => 1,
    };
    let s = s1 + s2;
    let z = ChargeSpec::full(alpha, beta, a, b).z_eval(&vf);
    let z = if s % 2 == 0 { z } else { -z };
    Ok(phase(&z, 0)?.total() - s as f64)
}

impl PhaseModel<'_> {
    /// Total phase of the witness, or `None` when the model assigns none.
    pub fn phase_of(&self, w: &WitnessObject) -> Result<Option<(f64, String)>> {
        match *self {
            PhaseModel::Geometric { alpha, beta, a, b } => match w.kind {
                WitnessKind::LineBundle(_) | WitnessKind::Skyscraper => {
                    let p = geometric_phase(&w.v, alpha, beta, a, b)?;
                    Ok(Some((p + w.shift as f64, w.stable_hint.clone())))
                }
                _ => Ok(None),
            },
            PhaseModel::Algebraic { coll, datum } => Ok(coll
                .classes
                .iter()
                .position(|c| *c == w.v)
                .map(|j| {
                    (
                        datum.phi[j] + w.shift as f64,
                        "exceptional collection member: stable on the algebraic region".to_string(),
                    )
                })),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapPair {
    pub source: String,
    pub target: String,
    pub degree: i64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GldimReport {
    /// Largest gap among facts whose endpoints carry a stability hint.
    pub lower_bound: f64,
    pub attaining_pair: Option<GapPair>,
    /// Largest gap among all tabulated facts.
    pub max_gap: f64,
    pub max_pair: Option<GapPair>,
    pub hints_used: Vec<String>,
    pub facts: usize,
    pub skipped_pairs: usize,
}

pub fn gldim_scan(alpha: f64, beta: f64, a: f64, b: f64, corpus: &[WitnessObject]) -> Result<GldimReport> {
    gldim_scan_with(&PhaseModel::Geometric { alpha, beta, a, b }, corpus)
}

pub fn gldim_scan_with(model: &PhaseModel<'_>, corpus: &[WitnessObject]) -> Result<GldimReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let phases: Vec<Option<(f64, String)>> = corpus
        .iter()
        .map(|w| model.phase_of(w))
        .collect::<Result<_>>()?;
    let n = corpus.len();
    // (gap pair, endpoints hinted, tabulated)
    let rows: Vec<(Vec<GapPair>, bool)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (Some((pa, _)), Some((pb, _))) = (&phases[i], &phases[j]) else {
                return (Vec::new(), false);
            };
            let Ok(fact) = hom_facts(&corpus[i], &corpus[j]) else {
                return (Vec::new(), false);
            };
            let pairs = fact
                .degrees
                .iter()
                .map(|&d| GapPair {
                    source: corpus[i].name(),
                    target: corpus[j].name(),
                    degree: d,
                    gap: pb + d as f64 - pa,
                })
                .collect();
            (pairs, true)
        })
        .collect();
    let skipped_pairs = rows.iter().filter(|(_, ok)| !ok).count();
    let mut best: Option<GapPair> = None;
    let mut facts = 0;
    for (pairs, _) in rows {
        for p in pairs {
            facts += 1;
            if best.as_ref().is_none_or(|b| p.gap > b.gap) {
                best = Some(p);
            }
        }
    }
    let mut hints: Vec<String> = phases.iter().flatten().map(|(_, h)| h.clone()).collect();
    hints.sort();
    hints.dedup();
    let gap = best.as_ref().map_or(f64::NEG_INFINITY, |p| p.gap);
    Ok(GldimReport {
        lower_bound: gap,
        attaining_pair: best.clone(),
        max_gap: gap,
        max_pair: best,
        hints_used: hints,
        facts,
        skipped_pairs,
    })
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

/// Tracks the continuous argument of `z(t)` on `[t0, t1]` in `steps` steps,
/// subdividing where consecutive samples differ by a quarter turn or more.
fn track(
    z: &dyn Fn(f64) -> Complex<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
    start_arg: f64,
) -> Result<Vec<(f64, f64)>> {
    let scale = |w: Complex<f64>| w.norm();
    let check = |t: f64| -> Result<Complex<f64>> {
        let w = z(t);
        if scale(w) <= tolerance() {
            return Err(Error::PathThroughZero(t));
        }
        Ok(w)
    };
    fn step(
        z: &dyn Fn(f64) -> Complex<f64>,
        check: &dyn Fn(f64) -> Result<Complex<f64>>,
        ta: f64,
        tb: f64,
        arg_a: f64,
        depth: u32,
    ) -> Result<f64> {
        let wa = z(ta);
        let wb = check(tb)?;
        let d = wrap(wb.arg() - wa.arg());
        if d.abs() < PI / 2.0 {
            return Ok(arg_a + d);
        }
        if depth == 0 {
            return Err(Error::PathThroughZero(0.5 * (ta + tb)));
        }
        let tm = 0.5 * (ta + tb);
        check(tm)?;
        let am = step(z, check, ta, tm, arg_a, depth - 1)?;
        step(z, check, tm, tb, am, depth - 1)
    }
    check(t0)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((t0, start_arg));
    let h = (t1 - t0) / steps as f64;
    for i in 1..=steps {
        let (ta, arg_a) = *out.last().unwrap();
        let tb = t0 + h * i as f64;
        let arg_b = step(z, &check, ta, tb, arg_a, 40)?;
        out.push((tb, arg_b));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monotonicity {
    /// Smallest forward difference of the tracked argument, in radians per unit `t`.
    pub min_derivative: f64,
    pub matches_im_formula: bool,
    /// `Im(Z′Z̄)/|Z|²` at `t = 0`.
    pub formula_rate: f64,
    /// Central difference of the argument at `t = 0`.
    pub numeric_rate: f64,
}

/// Follows the argument of `Z^{a,b}_{α,β−tc}(v)` for `t ∈ [0, t_max]`.
#[allow(clippy::too_many_arguments)]
pub fn phase_monotonicity(
    v: &ChernVector<f64>,
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
    c: f64,
    t_max: f64,
    steps: usize,
) -> Result<Monotonicity> {
    if c < 0.0 || t_max <= 0.0 || steps == 0 {
        return Err(Error::BadParams("need c >= 0, t_max > 0, steps >= 1".into()));
    }
    let z = |t: f64| ChargeSpec::full(alpha, beta - t * c, a, b).z_eval(v);
    let z0 = z(0.0);
    let path = track(&z, 0.0, t_max, steps, z0.arg())?;
    let min_derivative = path
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .fold(f64::INFINITY, f64::min);
    let im = im_zprime_zbar(v, &alpha, &beta, &a, &b, &c)?.value;
    let formula_rate = im / z0.norm_sqr();
    let h = 1e-6;
    let numeric_rate = wrap(z(h).arg() - z(-h).arg()) / (2.0 * h);
    let tol = 1e-6 * (1.0 + formula_rate.abs());
    let matches_im_formula = (numeric_rate - formula_rate).abs() <= tol
        && (formula_rate.abs() <= tol || formula_rate.signum() == numeric_rate.signum());
    Ok(Monotonicity {
        min_derivative,
        matches_im_formula,
        formula_rate,
        numeric_rate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LargeVolume {
    pub start_phase: f64,
    /// Tracked phase at `s = alpha_max`.
    pub phase_at_max: f64,
    /// Phase of the leading term as `s → ∞`, lifted next to `phase_at_max`.
    pub limit_phase: f64,
    /// The half-open unit interval `(lo, hi]` holding `limit_phase`.
    pub window: (f64, f64),
}

/// Follows the phase of the tilt charge `Z_{s,β}(v)` from small `s` up to
/// `alpha_max`, starting on the branch of whichever of `v`, `v[1]` has its
/// charge in the closed upper half plane minus `ℝ_{≥0}`.
pub fn large_volume_window(v: &ChernVector<f64>, beta: f64, alpha_max: f64, steps: usize) -> Result<LargeVolume> {
    if v.is_zero() {
        return Err(Error::BadInput("zero class".into()));
    }
    if alpha_max <= 0.0 || steps == 0 {
        return Err(Error::BadParams("need alpha_max > 0 and steps >= 1".into()));
    }
    let z = |s: f64| ChargeSpec::tilt(s, beta).z_eval(v);
    let s0 = alpha_max / steps as f64;
    let w0 = z(s0);
    let in_upper = w0.im > 0.0 || (w0.im == 0.0 && w0.re < 0.0);
    let start_phase = if in_upper {
        phase(&w0, 0)?.total()
    } else {
        phase(&-w0, 0)?.total() - 1.0
    };
    let path = track(&z, s0, alpha_max, steps, start_phase * PI)?;
    let phase_at_max = path.last().unwrap().1 / PI;
    let zeta = v.twist(&beta);
    // leading term of Re = −ζ3 + s²ζ1/2, Im = sζ2 − s³ζ0/6
    let lead = if zeta.e0 != 0.0 {
        Complex::new(0.0, -zeta.e0)
    } else if zeta.e1 != 0.0 {
        Complex::new(zeta.e1, 0.0)
    } else if zeta.e2 != 0.0 {
        Complex::new(0.0, zeta.e2)
    } else {
        Complex::new(-zeta.e3, 0.0)
    };
    let base = lead.arg() / PI;
    let limit_phase = base + 2.0 * ((phase_at_max - base) / 2.0).round();
    let hi = limit_phase.ceil() + 0.0;
    Ok(LargeVolume {
        start_phase,
        phase_at_max,
        limit_phase,
        window: (hi - 1.0, hi),
    })
}
