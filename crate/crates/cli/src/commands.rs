use std::fs;

use serde_json::{json, Value};
use stabp3::charges::phase;
use stabp3::exceptional::{
    algebraic_charge, check_exceptional, mutate, parse_collection, parse_mutation, theta_membership,
    AlgebraicDatum, ExcCollection,
};
use stabp3::psi::{boundary_witness_search, psi_estimate, region_membership, PsiOptions, PsiProxy};
use stabp3::quadforms::{bg_report, canonical_k, im_zprime_zbar, q_k_value, support_interval};
use stabp3::slopes::{mu, nu, trichotomy};
use stabp3::walls::{destabilizer_search, wall_conic};
use stabp3::witnesses::{
    default_corpus, gldim_scan_with, hom_facts, large_volume_window, parse_corpus, phase_monotonicity, GapPair,
    PhaseModel, WitnessObject,
};
use stabp3::{ChargeSpec, Scalar, Q};

use crate::args::{Command, Format, Point, Proxy};
use crate::config::Config;
use crate::emit;
use crate::error::{CliError, EXIT_NUMERIC};

/// Text for standard output plus the exit status.
pub struct Output {
    pub text: String,
    pub status: u8,
}

impl Output {
    fn json(v: Value) -> Self {
        Self { text: format!("{v}\n"), status: 0 }
    }
}

type Res = Result<Output, CliError>;

fn four(values: &[Q], what: &str) -> Result<[f64; 4], CliError> {
    match values {
        [a, b, c, d] => Ok([a.to_f64(), b.to_f64(), c.to_f64(), d.to_f64()]),
        _ => Err(CliError::input(format!("--{what} needs four values, got {}", values.len()))),
    }
}

fn positive_alpha(alpha: &Q) -> Result<(), CliError> {
    if alpha.is_pos() {
        Ok(())
    } else {
        Err(CliError::input("--alpha must be positive"))
    }
}

fn collection(cfg: &Config, spec: &str, mutations: &[String]) -> Result<ExcCollection, CliError> {
    let mut coll = parse_collection(spec)?;
    for m in mutations {
        let (i, side) = parse_mutation(m)?;
        coll = mutate(&cfg.variety, &coll, i, side)?;
    }
    Ok(coll)
}

fn gap_pair(p: &Option<GapPair>) -> Value {
    match p {
        Some(p) => json!({ "source": p.source, "target": p.target, "degree": p.degree, "gap": emit::real(p.gap) }),
        None => Value::Null,
    }
}

fn witness(text: &str) -> Result<WitnessObject, CliError> {
    Ok(text.parse::<WitnessObject>()?)
}

pub fn run(cmd: &Command, cfg: &Config) -> Res {
    match cmd {
        Command::Charge { class, alpha, beta, a, b, coeffs, shift } => {
            let spec = match (coeffs, alpha, beta) {
                (Some(c), _, _) => {
                    if c.len() != 8 {
                        return Err(CliError::input(format!("--coeffs needs eight values, got {}", c.len())));
                    }
                    ChargeSpec::from_coeffs(
                        std::array::from_fn(|k| c[k].clone()),
                        std::array::from_fn(|k| c[4 + k].clone()),
                    )
                }
                (None, Some(alpha), Some(beta)) => {
                    positive_alpha(alpha)?;
                    match (a, b) {
                        (Some(a), Some(b)) => ChargeSpec::full(alpha.clone(), beta.clone(), a.clone(), b.clone()),
                        _ => ChargeSpec::tilt(alpha.clone(), beta.clone()),
                    }
                }
                _ => return Err(CliError::input("need --alpha and --beta, or --coeffs")),
            };
            let z = spec.z_eval(class);
            let p = phase(&z, *shift)?;
            Ok(Output::json(json!({
                "re": emit::q(&z.re),
                "im": emit::q(&z.im),
                "phase_frac": emit::real(p.frac),
                "phase_shift": p.shift,
            })))
        }
        Command::Bg { class, alpha, beta, k } => {
            positive_alpha(alpha)?;
            let rep = bg_report(class, alpha, beta);
            Ok(Output::json(json!({
                "class": emit::class(class),
                "mu": emit::slope(&mu(class, beta)),
                "nu": emit::slope(&nu(class, alpha, beta)),
                "trichotomy": trichotomy(class, alpha, beta).name(),
                "discriminant": emit::q(&class.discriminant()),
                "classical": rep.classical,
                "generalized": rep.generalized,
                "bmt_strict": rep.bmt_strict,
                "q_k": k.as_ref().map(|k| emit::q(&q_k_value(class, k, beta))),
            })))
        }
        Command::Interval { point: Point { alpha, beta, a, b }, require_canonical } => {
            positive_alpha(alpha)?;
            let iv = support_interval(alpha, beta, a, b)?;
            let k = canonical_k(alpha, a);
            let contains = iv.contains(k.to_f64());
            let mut out = Output::json(json!({
                "k_min": emit::opt_real(iv.k_min),
                "k_max": emit::opt_real(iv.k_max),
                "empty": iv.empty,
                "canonical_k": emit::q(&k),
                "contains_canonical": contains,
            }));
            if *require_canonical && !contains {
                eprintln!("canonical K = {} is not in the support interval", emit::q(&k));
                out.status = EXIT_NUMERIC;
            }
            Ok(out)
        }
        Command::MonotoneForm { class, point: Point { alpha, beta, a, b }, c } => {
            positive_alpha(alpha)?;
            let r = im_zprime_zbar(class, alpha, beta, a, b, c)?;
            Ok(Output::json(json!({
                "value": emit::q(&r.value),
                "expansion": emit::q(&r.expansion),
                "expansion_ok": r.expansion_ok,
            })))
        }
        Command::Psi { alpha, beta, b, box_bound, window, steiner, semi_homogeneous } => {
            let n = box_bound.unwrap_or(cfg.box_bound);
            let w = window.clone().unwrap_or_else(|| cfg.nu_window.clone());
            let opts = PsiOptions { steiner: *steiner, semi_homogeneous: *semi_homogeneous };
            let e = psi_estimate(alpha, beta, b, n, &w, opts)?;
            Ok(Output::json(json!({
                "closed_form": emit::q(&e.closed_form),
                "lower": e.lower.as_ref().map(emit::q),
                "upper": e.upper.as_ref().map(emit::q),
                "lower_witness": e.lower_witness.as_ref().map(|w| w.name()),
                "lower_witness_class": e.lower_witness.as_ref().map(|w| emit::class(&w.class())),
                "upper_witness": e.upper_witness.as_ref().map(emit::class),
                "mid_bound": emit::real(e.mid_bound),
                "box": n,
                "window": emit::q(&w),
            })))
        }
        Command::Region { point: Point { alpha, beta, a, b }, box_bound, window, proxy } => {
            let n = box_bound.unwrap_or(cfg.box_bound);
            let w = window.clone().unwrap_or_else(|| cfg.nu_window.clone());
            let e = psi_estimate(alpha, beta, b, n, &w, PsiOptions::default())?;
            let proxy = match proxy {
                Proxy::ClosedForm => PsiProxy::ClosedForm,
                Proxy::Bracket => PsiProxy::Bracket,
            };
            let f = region_membership(alpha, a, b, &e, proxy);
            Ok(Output::json(json!({
                "in_b": f.in_b,
                "in_b_psi": emit::tri(f.in_b_psi),
                "in_b_star_psi": emit::tri(f.in_b_star_psi),
                "closed_form": emit::q(&e.closed_form),
                "lower": e.lower.as_ref().map(emit::q),
                "upper": e.upper.as_ref().map(emit::q),
            })))
        }
        Command::Boundary { point: Point { alpha, beta, a, b }, box_bound } => {
            positive_alpha(alpha)?;
            let n = box_bound.unwrap_or(cfg.box_bound);
            Ok(Output::json(emit::classes(&boundary_witness_search(alpha, beta, a, b, n))))
        }
        Command::Wall { v, w, beta_range, samples, format } => {
            let (lo, hi) = match beta_range.as_slice() {
                [lo, hi] if lo < hi => (lo.to_f64(), hi.to_f64()),
                _ => return Err(CliError::input("--beta-range needs `lo,hi` with lo < hi")),
            };
            let wall = wall_conic(v, w);
            let pts = wall.sample(lo, hi, *samples);
            let text = match format.or(cfg.output).unwrap_or(Format::Csv) {
                Format::Csv => emit::csv(&pts),
                Format::Svg => emit::svg(&pts, lo, hi),
                Format::Json => {
                    let p = &wall.poly;
                    let v = json!({
                        "v": emit::class(v),
                        "w": emit::class(w),
                        "poly": {
                            "const": emit::q(&p.c),
                            "beta": emit::q(&p.b1),
                            "beta2": emit::q(&p.b2),
                            "alpha2": emit::q(&p.a2),
                        },
                        "identically_zero": wall.identically_zero,
                        "circle": p.circle().map(|(c, r2)| json!({ "center": emit::q(&c), "radius_sq": emit::q(&r2) })),
                        "points": pts.iter().map(|(b, a)| json!([emit::real(*b), emit::real(*a)])).collect::<Vec<_>>(),
                    });
                    format!("{v}\n")
                }
            };
            Ok(Output { text, status: 0 })
        }
        Command::Destab { v, alpha, beta, box_bound } => {
            positive_alpha(alpha)?;
            let n = box_bound.unwrap_or(cfg.box_bound);
            Ok(Output::json(emit::classes(&destabilizer_search(v, alpha, beta, n)?)))
        }
        Command::Exc { collection: spec, mutate: muts, m, phi } => {
            let coll = collection(cfg, spec, muts)?;
            let datum = AlgebraicDatum { m: four(m, "m")?, phi: four(phi, "phi")? };
            let exceptional = check_exceptional(&cfg.variety, &coll)?;
            let flags = theta_membership(&datum);
            let charge = algebraic_charge(&coll, &datum)?;
            let members: Vec<Value> = coll
                .names
                .iter()
                .zip(&coll.classes)
                .map(|(n, c)| json!({ "name": n, "class": emit::class(c) }))
                .collect();
            Ok(Output::json(json!({
                "members": members,
                "exceptional": exceptional,
                "in_theta": flags.in_theta,
                "in_theta_star": flags.in_theta_star,
                "charge": {
                    "re": charge.spec.re.iter().map(|x| emit::real(*x)).collect::<Vec<_>>(),
                    "im": charge.spec.im.iter().map(|x| emit::real(*x)).collect::<Vec<_>>(),
                },
                "residual": emit::real(charge.residual),
            })))
        }
        Command::Gldim { alpha, beta, a, b, corpus, collection: coll_spec, m, phi } => {
            let corpus = match corpus {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
                    parse_corpus(&text)?
                }
                None => default_corpus(),
            };
            let coll;
            let datum;
            let model = match (coll_spec, phi) {
                (Some(spec), Some(phi)) => {
                    coll = collection(cfg, spec, &[])?;
                    datum = AlgebraicDatum { m: four(m, "m")?, phi: four(phi, "phi")? };
                    PhaseModel::Algebraic { coll: &coll, datum: &datum }
                }
                _ => match (alpha, beta, a, b) {
                    (Some(alpha), Some(beta), Some(a), Some(b)) => {
                        positive_alpha(alpha)?;
                        PhaseModel::Geometric { alpha: alpha.to_f64(), beta: beta.to_f64(), a: a.to_f64(), b: b.to_f64() }
                    }
                    _ => return Err(CliError::input("need --alpha --beta --a --b, or --collection with --phi")),
                },
            };
            let r = gldim_scan_with(&model, &corpus)?;
            Ok(Output::json(json!({
                "lower_bound": emit::real(r.lower_bound),
                "attaining_pair": gap_pair(&r.attaining_pair),
                "max_gap": emit::real(r.max_gap),
                "max_pair": gap_pair(&r.max_pair),
                "facts": r.facts,
                "skipped_pairs": r.skipped_pairs,
                "hints_used": r.hints_used,
            })))
        }
        Command::Monotone { class, point: Point { alpha, beta, a, b }, c, t_max, steps } => {
            positive_alpha(alpha)?;
            let r = phase_monotonicity(
                &class.to_f64(),
                alpha.to_f64(),
                beta.to_f64(),
                a.to_f64(),
                b.to_f64(),
                c.to_f64(),
                t_max.to_f64(),
                *steps,
            )?;
            Ok(Output::json(json!({
                "min_derivative": emit::real(r.min_derivative),
                "matches_im_formula": r.matches_im_formula,
                "formula_rate": emit::real(r.formula_rate),
                "numeric_rate": emit::real(r.numeric_rate),
            })))
        }
        Command::Window { class, beta, alpha_max, steps } => {
            let r = large_volume_window(&class.to_f64(), beta.to_f64(), alpha_max.to_f64(), *steps)?;
            Ok(Output::json(json!({
                "start_phase": emit::real(r.start_phase),
                "phase_at_max": emit::real(r.phase_at_max),
                "limit_phase": emit::real(r.limit_phase),
                "window": [emit::real(r.window.0), emit::real(r.window.1)],
            })))
        }
        Command::Witness { kind, with } => {
            let w = witness(kind)?;
            let mut out = json!({
                "name": w.name(),
                "class": emit::class(&w.class()),
                "shift": w.shift,
                "stable_hint": w.stable_hint,
                "slope_stable": w.slope_stable,
            });
            if let Some(other) = with {
                let o = witness(other)?;
                let facts = hom_facts(&w, &o)?;
                let shifted: Vec<i64> = facts.degrees.iter().map(|d| d + w.shift - o.shift).collect();
                out["target"] = json!(o.name());
                out["ext_degrees_unshifted"] = json!(facts.degrees.iter().collect::<Vec<_>>());
                out["ext_degrees"] = json!(shifted);
            }
            Ok(Output::json(out))
        }
    }
}
