use serde_json::{json, Value};
use stabp3::psi::Tri;
use stabp3::scalar::render_q;
use stabp3::{ChernVector, Slope, Q};

pub fn q(x: &Q) -> Value {
    Value::String(render_q(x))
}

/// Shortest round-trip decimal; integral values print without a fraction.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        let s = if x.is_nan() { "nan" } else if x > 0.0 { "+inf" } else { "-inf" };
        return Value::String(s.into());
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return json!(x as i64);
    }
    json!(x)
}

pub fn opt_real(x: Option<f64>) -> Value {
    x.map_or(Value::Null, real)
}

pub fn slope(s: &Slope<Q>) -> Value {
    match s {
        Slope::Finite(x) => q(x),
        Slope::PosInf => Value::String("+inf".into()),
    }
}

pub fn class(v: &ChernVector<Q>) -> Value {
    Value::String(v.render())
}

pub fn classes(vs: &[ChernVector<Q>]) -> Value {
    json!({ "count": vs.len(), "classes": vs.iter().map(class).collect::<Vec<_>>() })
}

pub fn tri(t: Tri) -> Value {
    match t.as_bool() {
        Some(b) => Value::Bool(b),
        None => Value::String("undecided".into()),
    }
}

pub fn csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("beta,alpha\n");
    for (b, a) in points {
        out.push_str(&format!("{b},{a}\n"));
    }
    out
}

/// Plot of sampled wall points in the upper half `(β, α)`-plane.
pub fn svg(points: &[(f64, f64)], lo: f64, hi: f64) -> String {
    const W: f64 = 600.0;
    const H: f64 = 400.0;
    const PAD: f64 = 30.0;
    let top = points.iter().map(|p| p.1).fold(1.0f64, f64::max).ceil();
    let x = |b: f64| PAD + (b - lo) / (hi - lo) * (W - 2.0 * PAD);
    let y = |a: f64| H - PAD - a / top * (H - 2.0 * PAD);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for k in (lo.ceil() as i64)..=(hi.floor() as i64) {
        let xk = x(k as f64);
        out.push_str(&format!(
            "<line x1=\"{xk:.2}\" y1=\"{:.2}\" x2=\"{xk:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/>\n",
            y(0.0),
            y(top)
        ));
    }
    for k in 0..=(top as i64) {
        let yk = y(k as f64);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{yk:.2}\" x2=\"{:.2}\" y2=\"{yk:.2}\" stroke=\"#ddd\"/>\n",
            x(lo),
            x(hi)
        ));
    }
    out.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        x(lo),
        y(0.0),
        x(hi),
        y(0.0)
    ));
    for segment in split_segments(points) {
        let pts: Vec<String> = segment.iter().map(|(b, a)| format!("{:.2},{:.2}", x(*b), y(*a))).collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Breaks the sample list where consecutive points are far apart.
fn split_segments(points: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let mut gaps: Vec<f64> = points.windows(2).map(|w| (w[1].0 - w[0].0).abs() + (w[1].1 - w[0].1).abs()).collect();
    gaps.sort_by(f64::total_cmp);
    let typical = gaps.get(gaps.len() / 2).copied().unwrap_or(0.0);
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let jump = i > 0 && {
            let prev = points[i - 1];
            (p.0 - prev.0).abs() + (p.1 - prev.1).abs() > 4.0 * typical.max(1e-12)
        };
        if i == 0 || jump {
            out.push(Vec::new());
        }
        out.last_mut().expect("segment started").push(*p);
    }
    out
}
