//! Central charges, phases and the group actions on them.

use num_complex::Complex;

use crate::chern::ChernVector;
use crate::error::{Error, Result};
use crate::scalar::{tolerance, Scalar};

/// Named normal forms of a central charge.
#[derive(Debug, Clone, PartialEq)]
pub enum ChargeTag<S> {
    /// `−∫ e^{−(β+iα)H} ch`.
    Tilt { alpha: S, beta: S },
    /// `Z^{a,b}_{α,β}`.
    Full { alpha: S, beta: S, a: S, b: S },
    General { a: S, b: S, c: S, d: S, beta: S },
}

impl<S: Scalar> ChargeTag<S> {
    pub fn beta(&self) -> &S {
        match self {
            ChargeTag::Tilt { beta, .. }
            | ChargeTag::Full { beta, .. }
            | ChargeTag::General { beta, .. } => beta,
        }
    }

    /// Real and imaginary parts as functionals on the twisted coordinates,
    /// ordered `(ζ3, ζ2, ζ1, ζ0)`.
    fn twisted_functionals(&self) -> ([S; 4], [S; 4]) {
        let two = S::from_i64(2);
        let six = S::from_i64(6);
        match self {
            ChargeTag::Tilt { alpha, .. } => {
                let a2 = alpha.clone() * alpha.clone();
                (
                    [-S::one(), S::zero(), a2.clone() / two, S::zero()],
                    [
                        S::zero(),
                        alpha.clone(),
                        S::zero(),
                        -(alpha.clone() * a2 / six),
                    ],
                )
            }
            ChargeTag::Full { alpha, a, b, .. } => (
                [-S::one(), b.clone(), a.clone(), S::zero()],
                [
                    S::zero(),
                    S::one(),
                    S::zero(),
                    -(alpha.clone() * alpha.clone() / two),
                ],
            ),
            ChargeTag::General { a, b, c, d, .. } => (
                [-S::one(), b.clone(), a.clone(), c.clone()],
                [S::zero(), S::one(), S::zero(), -d.clone()],
            ),
        }
    }

    /// Evaluates the normal form directly on twisted coordinates.
    pub fn eval(&self, v: &ChernVector<S>) -> Complex<S> {
        let z = v.twist(self.beta());
        let zeta = [z.e3, z.e2, z.e1, z.e0];
        let (re, im) = self.twisted_functionals();
        Complex::new(pair(&re, &zeta), pair(&im, &zeta))
    }
}

fn pair<S: Scalar>(c: &[S; 4], x: &[S; 4]) -> S {
    c.iter()
        .zip(x)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// A central charge in coefficient form.
///
/// `re` and `im` pair with `(e3, e2, e1, e0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeSpec<S> {
    pub re: [S; 4],
    pub im: [S; 4],
    pub tag: Option<ChargeTag<S>>,
}

impl<S: Scalar> ChargeSpec<S> {
    pub fn from_coeffs(re: [S; 4], im: [S; 4]) -> Self {
        Self { re, im, tag: None }
    }

    pub fn from_tag(tag: ChargeTag<S>) -> Self {
        let (re_t, im_t) = tag.twisted_functionals();
        let beta = tag.beta().clone();
        // coefficient of e_k is the twisted functional evaluated on the twisted unit vector
        let mut re: [S; 4] = std::array::from_fn(|_| S::zero());
        let mut im: [S; 4] = std::array::from_fn(|_| S::zero());
        for k in 0..4 {
            let mut unit: [S; 4] = std::array::from_fn(|_| S::zero());
            unit[k] = S::one();
            let z = ChernVector::from_array(unit).twist(&beta);
            let zeta = [z.e3, z.e2, z.e1, z.e0];
            re[3 - k] = pair(&re_t, &zeta);
            im[3 - k] = pair(&im_t, &zeta);
        }
        Self {
            re,
            im,
            tag: Some(tag),
        }
    }

    pub fn tilt(alpha: S, beta: S) -> Self {
        Self::from_tag(ChargeTag::Tilt { alpha, beta })
    }

    pub fn full(alpha: S, beta: S, a: S, b: S) -> Self {
        Self::from_tag(ChargeTag::Full { alpha, beta, a, b })
    }

    pub fn general(a: S, b: S, c: S, d: S, beta: S) -> Self {
        Self::from_tag(ChargeTag::General { a, b, c, d, beta })
    }

    pub fn z_eval(&self, v: &ChernVector<S>) -> Complex<S> {
        let x = [v.e3.clone(), v.e2.clone(), v.e1.clone(), v.e0.clone()];
        Complex::new(pair(&self.re, &x), pair(&self.im, &x))
    }

    /// Coefficient rows of `Re Z` and `Im Z` in lattice order `(e0, e1, e2, e3)`.
    pub fn rows(&self) -> [Vec<S>; 2] {
        let flip = |c: &[S; 4]| vec![c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()];
        [flip(&self.re), flip(&self.im)]
    }

    pub fn to_f64(&self) -> ChargeSpec<f64> {
        let conv = |c: &[S; 4]| std::array::from_fn(|i| c[i].to_f64());
        let tag = self.tag.as_ref().map(|t| match t {
            ChargeTag::Tilt { alpha, beta } => ChargeTag::Tilt {
                alpha: alpha.to_f64(),
                beta: beta.to_f64(),
            },
            ChargeTag::Full { alpha, beta, a, b } => ChargeTag::Full {
                alpha: alpha.to_f64(),
                beta: beta.to_f64(),
                a: a.to_f64(),
                b: b.to_f64(),
            },
            ChargeTag::General { a, b, c, d, beta } => ChargeTag::General {
                a: a.to_f64(),
                b: b.to_f64(),
                c: c.to_f64(),
                d: d.to_f64(),
                beta: beta.to_f64(),
            },
        });
        ChargeSpec {
            re: conv(&self.re),
            im: conv(&self.im),
            tag,
        }
    }
}

pub fn z_eval<S: Scalar>(spec: &ChargeSpec<S>, v: &ChernVector<S>) -> Complex<S> {
    spec.z_eval(v)
}

/// A phase `shift + frac` with `frac ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseValue {
    pub shift: i64,
    pub frac: f64,
}

impl PhaseValue {
    pub fn total(&self) -> f64 {
        self.shift as f64 + self.frac
    }

    pub fn from_total(phi: f64) -> Self {
        let shift = phi.ceil() as i64 - 1;
        Self {
            shift,
            frac: phi - shift as f64,
        }
    }
}

/// The phase of `z` lying in `(shift − 1, shift + 1]`.
pub fn phase<S: Scalar>(z: &Complex<S>, shift: i64) -> Result<PhaseValue> {
    if z.re.is_nil() && z.im.is_nil() {
        return Err(Error::ZeroCharge);
    }
    let mut theta = z.im.to_f64().atan2(z.re.to_f64()) / std::f64::consts::PI;
    if theta <= -1.0 {
        theta += 2.0;
    }
    let k = shift as f64;
    let mut phi = theta + 2.0 * ((k - theta) / 2.0).round();
    while phi <= k - 1.0 {
        phi += 2.0;
    }
    while phi > k + 1.0 {
        phi -= 2.0;
    }
    Ok(PhaseValue::from_total(phi))
}

/// An element `(T, f)` of the universal cover of `GL⁺(2, ℝ)`.
///
/// `f` is determined by `f(0) = lift_base` and continuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GLTilde {
    pub matrix: [[f64; 2]; 2],
    pub lift_base: f64,
}

fn arg_pi(x: f64, y: f64) -> f64 {
    let t = y.atan2(x) / std::f64::consts::PI;
    if t <= -1.0 {
        t + 2.0
    } else {
        t
    }
}

impl GLTilde {
    pub fn identity() -> Self {
        Self {
            matrix: [[1.0, 0.0], [0.0, 1.0]],
            lift_base: 0.0,
        }
    }

    pub fn det(&self) -> f64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// Checks orientation and that `lift_base` projects to the direction of `T·1`.
    pub fn new(matrix: [[f64; 2]; 2], lift_base: f64) -> Result<Self> {
        let g = Self { matrix, lift_base };
        if g.det() <= 0.0 {
            return Err(Error::BadParams("matrix must have positive determinant".into()));
        }
        let base = arg_pi(matrix[0][0], matrix[1][0]);
        let diff = (lift_base - base).rem_euclid(2.0);
        if diff.min(2.0 - diff) > 1e-9 {
            return Err(Error::BadParams("lift incompatible with matrix".into()));
        }
        Ok(g)
    }

    /// The lift with `f(0)` in `(−1, 1]`.
    pub fn from_matrix(matrix: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(matrix, arg_pi(matrix[0][0], matrix[1][0]))
    }

    /// The element acting as `Z ↦ e^{−iπx+πy} Z`, `φ ↦ φ + x`.
    pub fn from_complex(x: f64, y: f64) -> Self {
        let r = (-std::f64::consts::PI * y).exp();
        let (s, c) = (std::f64::consts::PI * x).sin_cos();
        Self {
            matrix: [[r * c, -r * s], [r * s, r * c]],
            lift_base: x,
        }
    }

    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.matrix;
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    /// `f(φ)`.
    pub fn lift(&self, phi: f64) -> f64 {
        let n = phi.floor();
        let r = phi - n;
        let (s, c) = (std::f64::consts::PI * r).sin_cos();
        let (x0, y0) = self.apply(1.0, 0.0);
        let (x1, y1) = self.apply(c, s);
        let theta = (arg_pi(x1, y1) - arg_pi(x0, y0)).rem_euclid(2.0);
        // an orientation preserving map sends the half-turn [0, π) into [0, π)
        let theta = if r == 0.0 || theta >= 1.0 + 1e-12 { 0.0 } else { theta.min(1.0) };
        n + self.lift_base + theta
    }

    /// Product `self · other`, acting as `self` followed by `other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.matrix;
        let b = &other.matrix;
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self {
            matrix: m,
            lift_base: self.lift(other.lift_base),
        }
    }

    pub fn inverse_matrix(&self) -> [[f64; 2]; 2] {
        let d = self.det();
        let m = &self.matrix;
        [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
    }
}

/// Acts by `g`: `Z ↦ T⁻¹Z` and a phase label `φ ↦ f(φ)`.
pub fn group_act(
    g: &GLTilde,
    spec: &ChargeSpec<f64>,
    phi: Option<PhaseValue>,
) -> (ChargeSpec<f64>, Option<PhaseValue>) {
    let inv = g.inverse_matrix();
    let re = std::array::from_fn(|k| inv[0][0] * spec.re[k] + inv[0][1] * spec.im[k]);
    let im = std::array::from_fn(|k| inv[1][0] * spec.re[k] + inv[1][1] * spec.im[k]);
    let tag = if *g == GLTilde::identity() {
        spec.tag.clone()
    } else {
        None
    };
    (
        ChargeSpec { re, im, tag },
        phi.map(|p| PhaseValue::from_total(g.lift(p.total()))),
    )
}

/// Acts by `λ = x + iy ∈ ℂ`.
pub fn complex_act(
    lambda: Complex<f64>,
    spec: &ChargeSpec<f64>,
    phi: Option<PhaseValue>,
) -> (ChargeSpec<f64>, Option<PhaseValue>) {
    group_act(&GLTilde::from_complex(lambda.re, lambda.im), spec, phi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    /// Acting by `g` on the input produces `form`.
    pub g: GLTilde,
    pub form: ChargeSpec<f64>,
}

fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

fn transform(m: [[f64; 2]; 2], re: &[f64; 4], im: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
    (
        std::array::from_fn(|k| m[0][0] * re[k] + m[0][1] * im[k]),
        std::array::from_fn(|k| m[1][0] * re[k] + m[1][1] * im[k]),
    )
}

/// Brings a charge to `General` form, and to `Full` form when `d > 0`.
pub fn normalize(spec: &ChargeSpec<f64>) -> Result<Normalized> {
    let tol = tolerance();
    let (zr, zi) = (spec.re[0], spec.im[0]);
    let n2 = zr * zr + zi * zi;
    if n2.sqrt() <= tol {
        return Err(Error::Degenerate);
    }
    // λ = −1/Z(O_x)
    let (lr, li) = (-zr / n2, zi / n2);
    let m1 = [[lr, -li], [li, lr]];
    let (re1, im1) = transform(m1, &spec.re, &spec.im);
    let b2 = im1[1];
    if b2 <= tol {
        return Err(Error::NotGeometric);
    }
    let m2 = [[1.0, 0.0], [0.0, 1.0 / b2]];
    let (re2, im2) = transform(m2, &re1, &im1);
    let beta = -im2[2];
    let d = beta * beta / 2.0 - im2[3];
    let b = re2[1] - beta;
    let a = re2[2] + beta * beta / 2.0 + b * beta;
    let c = re2[3] - beta.powi(3) / 6.0 - b * beta * beta / 2.0 + a * beta;
    let mut total = mat_mul(m2, m1);
    let form = if d > tol {
        let s = c / d;
        total = mat_mul([[1.0, s], [0.0, 1.0]], total);
        ChargeSpec::full((2.0 * d).sqrt(), beta, a, b + s)
    } else {
        ChargeSpec::general(a, b, c, d, beta)
    };
    let g = GLTilde {
        matrix: total,
        lift_base: 0.0,
    };
    let matrix = g.inverse_matrix();
    Ok(Normalized {
        g: GLTilde::from_matrix(matrix)?,
        form,
    })
}

/// `Z^{a,b}_{α,β}(v ⊗ O(−c)) = Z^{a,b}_{α,β+c}(v)`.
pub fn twist_equivariance_check<S: Scalar>(
    v: &ChernVector<S>,
    alpha: &S,
    beta: &S,
    a: &S,
    b: &S,
    c: i64,
) -> bool {
    let lhs = ChargeSpec::full(alpha.clone(), beta.clone(), a.clone(), b.clone())
        .z_eval(&v.tensor_line(-c));
    let rhs = ChargeSpec::full(
        alpha.clone(),
        beta.clone() + S::from_i64(c),
        a.clone(),
        b.clone(),
    )
    .z_eval(v);
    (lhs.re - rhs.re).is_nil() && (lhs.im - rhs.im).is_nil()
}
