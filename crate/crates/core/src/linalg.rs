//! Small dense linear algebra over any [`Scalar`].

use crate::scalar::Scalar;

pub type Mat4<S> = [[S; 4]; 4];

fn pivot_row<S: Scalar>(m: &[Vec<S>], col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !m[r][col].is_nil())
    } else {
        (from..m.len())
            .filter(|&r| !m[r][col].is_nil())
            .max_by(|&a, &b| {
                m[a][col]
                    .to_f64()
                    .abs()
                    .partial_cmp(&m[b][col].to_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalar>(m: &mut [Vec<S>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pivot_row(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone();
                    m[i][j] = m[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the null space of the given rows.
pub fn kernel<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` for square `a`; `None` when singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant by elimination.
pub fn det<S: Scalar>(a: &[Vec<S>]) -> S {
    let n = a.len();
    let mut m = a.to_vec();
    let mut acc = S::one();
    for c in 0..n {
        let Some(p) = pivot_row(&m, c, c) else {
            return S::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let piv = m[c][c].clone();
        acc = acc * piv.clone();
        for i in c + 1..n {
            let f = m[i][c].clone() / piv.clone();
            for j in c..n {
                let v = m[c][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    acc
}

pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// `xᵀ G y`.
pub fn bilinear<S: Scalar>(g: &Mat4<S>, x: &[S; 4], y: &[S; 4]) -> S {
    let mut acc = S::zero();
    for i in 0..4 {
        for j in 0..4 {
            if !g[i][j].is_zero() {
                acc = acc + x[i].clone() * g[i][j].clone() * y[j].clone();
            }
        }
    }
    acc
}

/// `Tᵀ G T`.
pub fn congruence<S: Scalar>(g: &Mat4<S>, t: &Mat4<S>) -> Mat4<S> {
    let mut out: Mat4<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = S::zero();
            for k in 0..4 {
                for l in 0..4 {
                    if !g[k][l].is_zero() && !t[k][i].is_zero() && !t[l][j].is_zero() {
                        acc = acc + t[k][i].clone() * g[k][l].clone() * t[l][j].clone();
                    }
                }
            }
            out[i][j] = acc;
        }
    }
    out
}
