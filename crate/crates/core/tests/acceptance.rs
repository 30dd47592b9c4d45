//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line and fails
//! its test on `FAIL`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use stabp3::charges::{group_act, normalize};
use stabp3::chern::euler;
use stabp3::exceptional::{algebraic_charge, beilinson, check_exceptional, theta_membership, AlgebraicDatum};
use stabp3::psi::{psi_closed_form, psi_estimate, boundary_witness_search, PsiOptions};
use stabp3::quadforms::{bg_report, canonical_k, im_zprime_zbar, q_k, q_k_value, quad_eval, support_interval};
use stabp3::quadforms::{ChargeParams, FormKind, FormParams};
use stabp3::slopes::nu;
use stabp3::walls::{destabilizer_search, wall_conic};
use stabp3::witnesses::{default_corpus, gldim_scan, gldim_scan_with, PhaseModel, WitnessKind};
use stabp3::{ChargeSpec, ChargeTag, ChernVector, GLTilde, Scalar, VarietyData, Q};

const NU_TOL: f64 = 1e-9;
const MID_BOUND_TOL: f64 = 1e-9;
const IM_ZPRIME_TOL: f64 = 1e-9;
const GAP_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const NORMALIZE_TOL: f64 = 1e-12;
const PSI_NU_WINDOW: (i64, i64) = (1, 1000);

type Check = Result<(), String>;

fn report(id: &str, what: &str, outcome: Check) {
    match outcome {
        Ok(()) => println!("PASS {id} {what}"),
        Err(msg) => {
            println!("FAIL {id} {what}: {msg}");
            panic!("{id} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn qr(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_q(r: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    qr(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn rand_pos_q(r: &mut ChaCha8Rng, num: i64, den: i64) -> Q {
    qr(r.gen_range(1..=num), r.gen_range(1..=den))
}

fn rand_class(r: &mut ChaCha8Rng) -> ChernVector<Q> {
    ChernVector::new(rand_q(r, 20, 7), rand_q(r, 20, 7), rand_q(r, 20, 7), rand_q(r, 20, 7))
}

/// Twisted coordinates computed from the binomial expansion of `e^{−β}`.
fn twisted(v: &ChernVector<Q>, beta: &Q) -> [Q; 4] {
    let e = [v.e0.clone(), v.e1.clone(), v.e2.clone(), v.e3.clone()];
    let mut out: [Q; 4] = std::array::from_fn(|_| q(0));
    let mut fact = q(1);
    for k in 0..4usize {
        if k > 0 {
            fact *= q(k as i64);
        }
        let coeff = num_traits::pow(-beta.clone(), k) / fact.clone();
        for i in 0..4 - k {
            out[i + k] += coeff.clone() * e[i].clone();
        }
    }
    out
}

struct BPoint {
    alpha: Q,
    beta: Q,
    a: Q,
    b: Q,
}

/// Rational points with `a > α²/6 + α|b|/2`.
fn sample_region(r: &mut ChaCha8Rng, n: usize) -> Vec<BPoint> {
    (0..n)
        .map(|_| {
            let alpha = qr(r.gen_range(1..=12), r.gen_range(1..=4));
            let beta = rand_q(r, 8, 4);
            let b = rand_q(r, 8, 4);
            let floor = alpha.clone() * alpha.clone() / q(6) + alpha.clone() * b.abs() / q(2);
            let a = floor + rand_pos_q(r, 8, 4);
            BPoint { alpha, beta, a, b }
        })
        .collect()
}

#[test]
fn c01_delta_bar_twist_invariance() {
    let mut r = rng(1);
    let outcome = (0..1000).try_for_each(|_| {
        let v = rand_class(&mut r);
        let beta = rand_q(&mut r, 30, 11);
        let t = twisted(&v, &beta);
        let from_twisted = t[1].clone() * t[1].clone() - q(2) * t[0].clone() * t[2].clone();
        let from_lib = v.twist(&beta).discriminant();
        ensure(from_twisted == v.discriminant() && from_lib == v.discriminant(), || {
            format!("v = {} beta = {beta}", v.render())
        })
    });
    report("C01", "discriminant is twist invariant on 1000 samples", outcome);
}

#[test]
fn c02_line_bundle_saturation() {
    let ks = [q(-2), q(0), qr(7, 2), q(10)];
    let betas: Vec<Q> = (-12..=12).map(|n| qr(n, 4)).collect();
    let mut outcome = Ok(());
    'outer: for d in -5..=5 {
        let o = ChernVector::<Q>::line_bundle(d);
        for k in &ks {
            for beta in &betas {
                let val = q_k(k, beta).eval(&o);
                if !val.is_zero() || !q_k_value(&o, k, beta).is_zero() {
                    outcome = Err(format!("Q_K(O({d})) = {val} at K = {k}, beta = {beta}"));
                    break 'outer;
                }
            }
        }
    }
    let outcome = outcome.and_then(|()| {
        for d in -5..=5 {
            for beta in &betas {
                for sign in [1, -1] {
                    let alpha = (q(d) - beta.clone()) * q(sign);
                    if !alpha.is_positive() {
                        continue;
                    }
                    // keep ch1^beta positive: O(d) itself or its shift
                    let v = if sign == 1 { ChernVector::line_bundle(d) } else { -ChernVector::line_bundle(d) };
                    let z = twisted(&v, beta);
                    let a2 = alpha.clone() * alpha.clone();
                    ensure(z[3].clone() == a2.clone() / q(6) * z[1].clone(), || format!("equality fails at d = {d}"))?;
                    ensure(z[3].clone() < a2.clone() / q(2) * z[1].clone(), || format!("strict fails at d = {d}"))?;
                    let rep = bg_report(&v, &alpha, beta);
                    ensure(rep.generalized == Some(true) && rep.bmt_strict == Some(true), || {
                        format!("bg_report {rep:?} at d = {d}, beta = {beta}")
                    })?;
                }
            }
        }
        Ok(())
    });
    report("C02", "line bundles saturate Q_K and the generalized inequality", outcome);
}

#[test]
fn c03_psi_at_integer_points() {
    let window = qr(PSI_NU_WINDOW.0, PSI_NU_WINDOW.1);
    let bs = [q(-2), q(-1), q(0), qr(1, 2), q(1), q(2)];
    let mut outcome = Ok(());
    'outer: for alpha in 1..=2 {
        for beta in -1..=1 {
            for b in &bs {
                let (al, be) = (q(alpha), q(beta));
                let expected = al.clone() * al.clone() / q(6) + al.clone() * b.abs() / q(2);
                let check = (|| -> Check {
                    let est = psi_estimate(&al, &be, b, 8, &window, PsiOptions::default()).map_err(|e| e.to_string())?;
                    ensure(est.closed_form == expected, || format!("closed form {}", est.closed_form))?;
                    ensure(est.lower.as_ref() == Some(&expected), || format!("lower {:?}", est.lower))?;
                    let wit = est.lower_witness.as_ref().ok_or("no witness")?;
                    let ok_witness = match (&wit.kind, wit.shift) {
                        (WitnessKind::LineBundle(d), 0) => *d == beta + alpha,
                        (WitnessKind::LineBundle(d), 1) => *d == beta - alpha,
                        _ => false,
                    };
                    // at b = 0 both witnesses attain the value
                    ensure(ok_witness, || format!("witness {}", wit.name()))?;
                    let upper = est.upper.clone().ok_or("no upper bound")?;
                    ensure(upper >= expected, || format!("upper {upper} below lower"))?;
                    ensure(upper.to_f64() <= est.mid_bound + MID_BOUND_TOL, || {
                        format!("upper {upper} above mid bound {}", est.mid_bound)
                    })
                })();
                if let Err(msg) = check {
                    outcome = Err(format!("alpha = {alpha}, beta = {beta}, b = {b}: {msg}"));
                    break 'outer;
                }
            }
        }
    }
    report("C03", "psi estimate at integer points", outcome);
}

#[test]
fn c04_support_interval_contains_canonical_k() {
    let pts = sample_region(&mut rng(4), 200);
    let outcome = pts.iter().try_for_each(|p| {
        let k = canonical_k(&p.alpha, &p.a).to_f64();
        let iv = support_interval(&p.alpha, &p.beta, &p.a, &p.b).map_err(|e| e.to_string())?;
        ensure(iv.contains(k), || {
            format!("K = {k} not in {iv:?} at ({}, {}, {}, {})", p.alpha, p.beta, p.a, p.b)
        })
    });
    report("C04", "canonical K lies in the support interval on 200 region points", outcome);
}

/// Null space of a rational matrix by Gauss–Jordan elimination.
fn null_space(rows: &[[Q; 4]]) -> Vec<[Q; 4]> {
    let mut m: Vec<[Q; 4]> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for j in 0..4 {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..4 {
                    m[i][j] = m[i][j].clone() - f.clone() * m[r][j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v: [Q; 4] = std::array::from_fn(|_| q(0));
            v[free] = q(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

#[test]
fn c05_s_delta_on_kernel() {
    let mut r = rng(5);
    let outcome = (0..50).try_for_each(|_| {
        let alpha = rand_pos_q(&mut r, 12, 5);
        let beta = rand_q(&mut r, 10, 4);
        let a = rand_q(&mut r, 10, 3);
        let b = rand_q(&mut r, 10, 3);
        let delta = rand_pos_q(&mut r, 9, 4);
        let spec = ChargeSpec::full(alpha.clone(), beta.clone(), a.clone(), b.clone());
        // rows act on (e0, e1, e2, e3)
        let row = |c: &[Q; 4]| -> [Q; 4] { [c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()] };
        let kernel = null_space(&[row(&spec.re), row(&spec.im)]);
        ensure(kernel.len() == 2, || format!("kernel dimension {}", kernel.len()))?;
        let params = FormParams { delta: Some(delta.clone()), ..FormParams::default() };
        let charge = ChargeParams { alpha: alpha.clone(), a: a.clone(), b: b.clone() };
        let mut probes: Vec<ChernVector<Q>> = kernel.iter().map(|k| ChernVector::from_array(k.clone())).collect();
        for (s, t) in [(1, 1), (2, -3), (-5, 7)] {
            probes.push(probes[0].scale(&q(s)) + probes[1].scale(&q(t)));
        }
        for v in probes {
            let z = spec.z_eval(&v);
            ensure(z.re.is_zero() && z.im.is_zero(), || "probe outside kernel".to_string())?;
            let val = quad_eval(FormKind::SDelta, &v, &beta, &params, Some(&charge)).map_err(|e| e.to_string())?;
            let z1 = twisted(&v, &beta)[1].clone();
            ensure(val == -delta.clone() * z1.clone() * z1, || format!("S_delta = {val} at {}", v.render()))?;
        }
        Ok(())
    });
    report("C05", "S_delta restricts to -delta (ch1^beta)^2 on the kernel", outcome);
}

/// `Z^{a,b}_{α,β−tc}(v)` from first principles.
fn z_full(v: &ChernVector<Q>, alpha: &Q, beta: &Q, a: &Q, b: &Q) -> (Q, Q) {
    let t = twisted(v, beta);
    let a2 = alpha.clone() * alpha.clone();
    (
        -t[3].clone() + b.clone() * t[2].clone() + a.clone() * t[1].clone(),
        t[2].clone() - a2 / q(2) * t[0].clone(),
    )
}

/// `Im(Z′ Z̄)` with `Z′` from exact cubic interpolation at `t ∈ {−1, 0, 1, 2}`.
fn im_zprime_oracle(v: &ChernVector<Q>, alpha: &Q, beta: &Q, a: &Q, b: &Q, c: &Q) -> Q {
    let at = |t: i64| z_full(v, alpha, &(beta.clone() - q(t) * c.clone()), a, b);
    let (m1, z0, p1, p2) = (at(-1), at(0), at(1), at(2));
    let d = |f: fn(&(Q, Q)) -> Q| {
        (q(-2) * f(&m1) - q(3) * f(&z0) + q(6) * f(&p1) - f(&p2)) / q(6)
    };
    let (dre, dim) = (d(|z| z.0.clone()), d(|z| z.1.clone()));
    dim * z0.0.clone() - dre * z0.1.clone()
}

/// A rational quadratic form on lattice tuples `(e0, e1, 2e2, 6e3)`, stored
/// as integers times a common scale.
struct IntForm {
    coeffs: [[i128; 4]; 4],
    scale: Q,
}

impl IntForm {
    fn polarize(f: impl Fn(&ChernVector<Q>) -> Q) -> Self {
        let unit = |i: usize, j: usize| {
            let mut t = [0i64; 4];
            t[i] += 1;
            t[j] += 1;
            ChernVector::from_lattice(t)
        };
        let diag: Vec<Q> = (0..4).map(|i| f(&unit(i, i)) / q(4)).collect();
        let mut g: [[Q; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| q(0)));
        for i in 0..4 {
            g[i][i] = diag[i].clone();
            for j in i + 1..4 {
                let both = f(&unit(i, j));
                g[i][j] = both - diag[i].clone() - diag[j].clone();
            }
        }
        let den = g.iter().flatten().fold(num_bigint::BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
        let scale = Q::from_integer(den.clone());
        let coeffs = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let n = (g[i][j].clone() * scale.clone()).to_integer();
                i128::try_from(n).expect("coefficient fits in i128")
            })
        });
        IntForm { coeffs, scale }
    }

    fn scaled(&self, x: [i64; 4]) -> i128 {
        let mut acc = 0i128;
        for i in 0..4 {
            for j in i..4 {
                acc += self.coeffs[i][j] * x[i] as i128 * x[j] as i128;
            }
        }
        acc
    }

    fn sign(&self, x: [i64; 4]) -> i32 {
        self.scaled(x).signum() as i32
    }

    fn value(&self, x: [i64; 4]) -> Q {
        Q::from_integer(self.scaled(x).into()) / self.scale.clone()
    }
}

#[test]
fn c06_im_zprime_expansion_and_positivity() {
    let mut r = rng(6);
    let outcome = (0..1000).try_for_each(|_| {
        let v = rand_class(&mut r);
        let alpha = rand_pos_q(&mut r, 12, 5);
        let beta = rand_q(&mut r, 10, 4);
        let a = rand_q(&mut r, 10, 3);
        let b = rand_q(&mut r, 10, 3);
        let c = qr(r.gen_range(0..=9), r.gen_range(1..=4));
        let res = im_zprime_zbar(&v, &alpha, &beta, &a, &b, &c).map_err(|e| e.to_string())?;
        let oracle = im_zprime_oracle(&v, &alpha, &beta, &a, &b, &c);
        ensure(res.value == oracle && res.expansion == oracle && res.expansion_ok, || {
            format!("value {} expansion {} oracle {oracle}", res.value, res.expansion)
        })
    });
    let outcome = outcome.and_then(|()| {
        let pts = sample_region(&mut rng(66), 20);
        let mut spot = rng(67);
        pts.iter().try_for_each(|p| {
            let k = canonical_k(&p.alpha, &p.a);
            let qk = IntForm::polarize(|v| q_k_value(v, &k, &p.beta));
            [q(0), q(1)].iter().try_for_each(|c| {
                let im = |v: &ChernVector<Q>| im_zprime_zbar(v, &p.alpha, &p.beta, &p.a, &p.b, c).unwrap().value;
                let form = IntForm::polarize(im);
                for _ in 0..200 {
                    let x: [i64; 4] = std::array::from_fn(|_| spot.gen_range(-6..=6));
                    let v = ChernVector::from_lattice(x);
                    ensure(form.value(x) == im(&v) && qk.value(x) == q_k_value(&v, &k, &p.beta), || {
                        format!("polarized forms disagree at {}", v.render())
                    })?;
                }
                (-6i64..=6).into_par_iter().try_for_each(|e0| {
                    for e1 in -6..=6 {
                        for m in -6..=6 {
                            for n in -6..=6 {
                                let x = [e0, e1, m, n];
                                if qk.sign(x) < 0 || form.sign(x) >= 0 {
                                    continue;
                                }
                                let val = form.value(x);
                                ensure(val.to_f64() >= -IM_ZPRIME_TOL, || {
                                    format!("Im(Z'Zbar) = {val} at lattice {x:?}, ({}, {}, {}, {})", p.alpha, p.beta, p.a, p.b)
                                })?;
                            }
                        }
                    }
                    Ok(())
                })
            })
        })
    });
    report("C06", "Im(Z' Zbar) expansion is exact and nonnegative where Q_K >= 0", outcome);
}

fn binom3(d: i64) -> Q {
    qr((d + 3) * (d + 2) * (d + 1), 6)
}

#[test]
fn c07_euler_and_serre() {
    let var = VarietyData::p3();
    let o = ChernVector::<Q>::line_bundle(0);
    let outcome = (-6..=6).try_for_each(|d| {
        let chi = euler(&var, &o, &ChernVector::line_bundle(d)).map_err(|e| e.to_string())?;
        ensure(chi == binom3(d), || format!("chi(O, O({d})) = {chi}"))
    });
    let outcome = outcome.and_then(|()| {
        ensure(binom3(-4) == q(-1) && (-3..=-1).all(|d| binom3(d).is_zero()), || "convention".into())?;
        let mut r = rng(7);
        (0..500).try_for_each(|_| {
            let (v, w) = (rand_class(&mut r), rand_class(&mut r));
            let lhs = euler(&var, &v, &w).map_err(|e| e.to_string())?;
            let rhs = -euler(&var, &w, &v.tensor_line(-4)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("{} vs {}", lhs, rhs))
        })
    });
    report("C07", "Euler characteristic of line bundles and Serre duality", outcome);
}

#[test]
fn c08_global_dimension_scan() {
    let corpus = default_corpus();
    let pts = sample_region(&mut rng(8), 20);
    let outcome = pts.iter().try_for_each(|p| {
        let rep = gldim_scan(p.alpha.to_f64(), p.beta.to_f64(), p.a.to_f64(), p.b.to_f64(), &corpus)
            .map_err(|e| e.to_string())?;
        let pair = rep.attaining_pair.clone().ok_or("no attaining pair")?;
        ensure(rep.lower_bound == 3.0 && pair.source == "O_x" && pair.target == "O_x" && pair.degree == 3, || {
            format!("lower bound {} via {pair:?}", rep.lower_bound)
        })?;
        ensure(rep.max_gap <= 3.0 + GAP_TOL, || format!("max gap {} via {:?}", rep.max_gap, rep.max_pair))
    });
    let outcome = outcome.and_then(|()| {
        let coll = beilinson(0);
        let datum = AlgebraicDatum { m: [1.0; 4], phi: [0.0, 1.5, 3.6, 6.1] };
        let members: Vec<_> = corpus
            .iter()
            .filter(|w| matches!(w.kind, WitnessKind::LineBundle(0..=3)))
            .cloned()
            .collect();
        let rep = gldim_scan_with(&PhaseModel::Algebraic { coll: &coll, datum: &datum }, &members)
            .map_err(|e| e.to_string())?;
        ensure(rep.lower_bound > 3.0 && (rep.lower_bound - 6.1).abs() <= GAP_TOL, || {
            format!("algebraic lower bound {}", rep.lower_bound)
        })
    });
    report("C08", "corpus scan attains 3 on the region and exceeds it algebraically", outcome);
}

#[test]
fn c09_boundary_witness() {
    let found = boundary_witness_search(&q(1), &q(0), &qr(1, 6), &q(0), 8);
    let outcome = ensure(found.contains(&ChernVector::line_bundle(1)), || format!("{} classes, no O(1)", found.len()))
        .and_then(|()| {
            let none = boundary_witness_search(&q(1), &q(0), &q(1), &q(0), 8);
            ensure(none.is_empty(), || format!("expected none, got {}", none.len()))
        })
        .and_then(|()| {
            let a = psi_closed_form(&q(1), &q(0));
            ensure(a == qr(1, 6), || format!("closed form {a}"))
        });
    report("C09", "boundary witness search", outcome);
}

fn truncation_passes(u: &[Q; 3], alpha: &Q, beta: &Q) -> bool {
    let z1 = u[1].clone() - beta.clone() * u[0].clone();
    match z1.cmp(&q(0)) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let z2 = u[2].clone() - beta.clone() * u[1].clone() + beta.clone() * beta.clone() / q(2) * u[0].clone();
            z2 - alpha.clone() * alpha.clone() / q(6) * u[0].clone() >= q(0)
        }
    }
}

/// Tilt slope numerator and denominator from twisted coordinates.
fn nu_parts(u: &[Q; 3], alpha: &Q, beta: &Q) -> (Q, Q) {
    let t = twisted(&ChernVector::new(u[0].clone(), u[1].clone(), u[2].clone(), q(0)), beta);
    (t[2].clone() - alpha.clone() * alpha.clone() / q(2) * t[0].clone(), alpha.clone() * t[1].clone())
}

fn nu_greater(w: &[Q; 3], v: &[Q; 3], alpha: &Q, beta: &Q) -> bool {
    let ((nw, dw), (nv, dv)) = (nu_parts(w, alpha, beta), nu_parts(v, alpha, beta));
    match (dw.is_zero(), dv.is_zero()) {
        (true, true) => false,
        (true, false) => true,
        (false, true) => false,
        (false, false) => nw / dw > nv / dv,
    }
}

fn brute_force_destabilizers(v: &ChernVector<Q>, alpha: &Q, beta: &Q, n: i64) -> Vec<ChernVector<Q>> {
    let vt = [v.e0.clone(), v.e1.clone(), v.e2.clone()];
    let disc = |u: &[Q; 3]| u[1].clone() * u[1].clone() - q(2) * u[0].clone() * u[2].clone();
    let z1 = |u: &[Q; 3]| u[1].clone() - beta.clone() * u[0].clone();
    let mut out = Vec::new();
    for e0 in -n..=n {
        for e1 in -n..=n {
            for m in -n..=n {
                let w = [q(e0), q(e1), qr(m, 2)];
                let rest = [vt[0].clone() - w[0].clone(), vt[1].clone() - w[1].clone(), vt[2].clone() - w[2].clone()];
                let zero = |u: &[Q; 3]| u.iter().all(|x| x.is_zero());
                if zero(&w) || zero(&rest) {
                    continue;
                }
                if z1(&w) < q(0) || z1(&w) > z1(&vt) || !nu_greater(&w, &vt, alpha, beta) {
                    continue;
                }
                if disc(&w) < q(0) || disc(&rest) < q(0) {
                    continue;
                }
                if truncation_passes(&w, alpha, beta) && truncation_passes(&rest, alpha, beta) {
                    out.push(ChernVector::new(w[0].clone(), w[1].clone(), w[2].clone(), q(0)));
                }
            }
        }
    }
    out
}

#[test]
fn c10_wall_conic_and_destabilizers() {
    let ideal = ChernVector::<Q>::from_ints(1, 0, 0, -1);
    let o_minus = ChernVector::<Q>::line_bundle(-1);
    let wall = wall_conic(&ideal, &o_minus);
    let p = &wall.poly;
    // (β + 1/2)² + α² − 1/4 = β² + β + α²
    let scale = p.a2.clone();
    let outcome = ensure(
        !scale.is_zero() && p.b2 == scale && p.b1 == scale && p.c.is_zero(),
        || format!("coefficients {p:?}"),
    )
    .and_then(|()| {
        let mut r = rng(10);
        (0..50).try_for_each(|_| {
            let (alpha, beta) = (rand_pos_q(&mut r, 9, 4), rand_q(&mut r, 9, 4));
            let (nv, dv) = nu_parts(&[q(1), q(0), q(0)], &alpha, &beta);
            let (nw, dw) = nu_parts(&[q(1), q(-1), qr(1, 2)], &alpha, &beta);
            let direct = (nv * dw - nw * dv) / alpha.clone();
            ensure(p.eval(&beta, &alpha) == direct, || format!("P mismatch at ({alpha}, {beta})"))
        })
    })
    .and_then(|()| {
        let pts = wall.sample(-1.5, 0.5, 400);
        ensure(!pts.is_empty(), || "no samples".into())?;
        pts.iter().try_for_each(|&(beta, alpha)| {
            let a = nu(&ideal.to_f64(), &alpha, &beta).to_f64();
            let b = nu(&o_minus.to_f64(), &alpha, &beta).to_f64();
            ensure((a - b).abs() <= NU_TOL, || format!("|nu - nu| = {} at ({beta}, {alpha})", (a - b).abs()))
        })
    })
    .and_then(|()| {
        let cases = [
            (ideal.clone(), qr(3, 10), qr(-1, 2)),
            (ideal.clone(), q(1), qr(-1, 3)),
            (ChernVector::line_bundle(2), q(1), q(0)),
            ("2,1,-1/2,0".parse().unwrap(), qr(1, 2), qr(1, 4)),
            ("0,2,1,0".parse().unwrap(), qr(2, 3), q(1)),
            ("3,-1,1,2".parse().unwrap(), qr(1, 5), qr(-5, 4)),
        ];
        cases.iter().try_for_each(|(v, alpha, beta)| {
            (1..=6).try_for_each(|n| {
                let got = destabilizer_search(v, alpha, beta, n).map_err(|e| e.to_string())?;
                let want = brute_force_destabilizers(v, alpha, beta, n as i64);
                ensure(got == want, || {
                    format!("{} at ({alpha}, {beta}) box {n}: {} vs {}", v.render(), got.len(), want.len())
                })
            })
        })
    });
    report("C10", "wall conic of the point ideal and destabilizer oracle", outcome);
}

#[test]
fn c11_exceptional_regions() {
    let var = VarietyData::p3();
    let coll = beilinson(0);
    let good = AlgebraicDatum { m: [1.0; 4], phi: [0.0, 1.5, 3.6, 6.1] };
    let bad = AlgebraicDatum { m: [1.0; 4], phi: [0.0, 1.0, 2.0, 3.0] };
    let outcome = check_exceptional(&var, &coll)
        .map_err(|e| e.to_string())
        .and_then(|ok| ensure(ok, || "Beilinson(0) not exceptional".into()))
        .and_then(|()| {
            let f = theta_membership(&good);
            ensure(f.in_theta && f.in_theta_star, || format!("{f:?}"))?;
            let f = theta_membership(&bad);
            ensure(!f.in_theta && !f.in_theta_star, || format!("{f:?}"))
        })
        .and_then(|()| {
            let ch = algebraic_charge(&coll, &good).map_err(|e| e.to_string())?;
            ensure(ch.residual <= RESIDUAL_TOL, || format!("residual {}", ch.residual))?;
            // recompute Z(E_j) independently
            coll.classes.iter().enumerate().try_for_each(|(j, c)| {
                let z = ch.spec.z_eval(&c.to_f64());
                let (s, co) = (std::f64::consts::PI * good.phi[j]).sin_cos();
                let err = ((z.re - co).powi(2) + (z.im - s).powi(2)).sqrt();
                ensure(err <= RESIDUAL_TOL, || format!("member {j}: error {err}"))
            })
        });
    report("C11", "Beilinson collection and algebraic regions", outcome);
}

#[test]
fn c12_normalization_round_trip() {
    let mut r = rng(12);
    let outcome = (0..100).try_for_each(|_| {
        let alpha: f64 = r.gen_range(0.2..3.0);
        let beta: f64 = r.gen_range(-3.0..3.0);
        let a: f64 = r.gen_range(-2.0..4.0);
        let b: f64 = r.gen_range(-2.0..2.0);
        let spec = ChargeSpec::full(alpha, beta, a, b);
        let g = GLTilde::from_complex(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0))
            .compose(&GLTilde::from_matrix([[1.0, r.gen_range(-2.0..2.0)], [0.0, r.gen_range(0.3..3.0)]]).map_err(|e| e.to_string())?);
        let (moved, _) = group_act(&g, &spec, None);
        let n = normalize(&moved).map_err(|e| e.to_string())?;
        match n.form.tag {
            Some(ChargeTag::Full { alpha: al, beta: be, a: aa, b: bb }) => {
                let err = [(al, alpha), (be, beta), (aa, a), (bb, b)]
                    .iter()
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                ensure(err <= NORMALIZE_TOL, || format!("error {err} at ({alpha}, {beta}, {a}, {b})"))
            }
            other => Err(format!("normal form {other:?}")),
        }
    });
    report("C12", "normalization recovers (alpha, beta, a, b)", outcome);
}
