//! Oracles shared by the integration tests. Nothing here calls into the
//! library's own algebra.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};

/// `Σ y_i m_i z_i`, written out.
pub fn b(m: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..m.len() {
        s += y[i] * m[i] * z[i];
    }
    s
}

/// Signature `(p, q, degenerate)` of `B` on `P0 = {Σ m_i x_i = 0}` by
/// `B`-orthogonalising the basis `e_k - (m_k / m_N) e_N`.
pub fn p0_signature_by_orthogonalization(m: &[f64]) -> (usize, usize, bool) {
    let n = m.len();
    let mut basis: Vec<Vec<f64>> = (0..n - 1)
        .map(|k| {
            let mut v = vec![0.0; n];
            v[k] = 1.0;
            v[n - 1] = -m[k] / m[n - 1];
            v
        })
        .collect();
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max)
        * basis.iter().flatten().map(|x| x * x).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let (mut p, mut q) = (0, 0);
    while !basis.is_empty() {
        let (k, qk) = basis
            .iter()
            .map(|u| b(m, u, u))
            .enumerate()
            .max_by(|a, c| a.1.abs().total_cmp(&c.1.abs()))
            .unwrap();
        if qk.abs() <= tol {
            // only null vectors left; a nonzero cross term yields a non-null sum
            let mut mixed = None;
            'find: for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    if b(m, &basis[i], &basis[j]).abs() > tol {
                        mixed = Some((i, j));
                        break 'find;
                    }
                }
            }
            match mixed {
                Some((i, j)) => {
                    let sum: Vec<f64> = basis[i].iter().zip(&basis[j]).map(|(a, c)| a + c).collect();
                    basis[i] = sum;
                    continue;
                }
                None => return (p, q, true),
            }
        }
        let pivot = basis.swap_remove(k);
        if qk > 0.0 {
            p += 1;
        } else {
            q += 1;
        }
        for w in basis.iter_mut() {
            let c = b(m, w, &pivot) / qk;
            for (wi, pi) in w.iter_mut().zip(&pivot) {
                *wi -= c * pi;
            }
        }
    }
    (p, q, false)
}

/// `T_ij` built from the two-body law in terms of the mass ratio.
pub fn collision_matrix_oracle(m: &[f64], i: usize, j: usize) -> DMatrix<f64> {
    let n = m.len();
    let (mi, mj) = (m[i], m[j]);
    let mut t = DMatrix::identity(n, n);
    t[(i, i)] = (mi - mj) / (mi + mj);
    t[(i, j)] = 2.0 * mj / (mi + mj);
    t[(j, i)] = 2.0 * mi / (mi + mj);
    t[(j, j)] = (mj - mi) / (mi + mj);
    t
}

/// Coordinates of `y` in the basis given by the columns of `basis`, by
/// least squares.
pub fn coordinates(basis: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    basis.clone().svd(true, true).solve(y, 1e-14).unwrap()
}

/// Real roots of `c0 + c1 t + c2 t^2` by the textbook formula.
pub fn quadratic_roots(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let d = c1 * c1 - 4.0 * c0 * c2;
    if d < 0.0 {
        return vec![];
    }
    let mut r = vec![(-c1 - d.sqrt()) / (2.0 * c2), (-c1 + d.sqrt()) / (2.0 * c2)];
    r.sort_by(f64::total_cmp);
    r
}

/// Inertia polynomial coefficients `[Q(x), 2B(x,v), Q(v)]`.
pub fn inertia_coeffs(m: &[f64], x: &[f64], v: &[f64]) -> [f64; 3] {
    [b(m, x, x), 2.0 * b(m, x, v), b(m, v, v)]
}
