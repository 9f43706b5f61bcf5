//! Real coordinates for Hermitian matrices.
//!
//! The basis is orthonormal under `<A, B> = Re Tr(A B)`: the `n` diagonal
//! units first, then for each `k < l` the pair `(e_kl + e_lk)/sqrt2` and
//! `i(e_kl - e_lk)/sqrt2`. Coordinates of a gradient matrix in this basis
//! are the gradient with respect to the coordinates.

use std::f64::consts::SQRT_2;

use crate::linalg::{ComplexMatrix, C64};

pub fn dim(n: usize) -> usize {
    n * n
}

/// Index of the first coordinate of the off-diagonal pair `(k, l)`, `k < l`.
fn pair_index(n: usize, k: usize, l: usize) -> usize {
    // Pairs are enumerated row by row over the strict upper triangle.
    let before: usize = (0..k).map(|r| n - 1 - r).sum();
    n + 2 * (before + (l - k - 1))
}

pub fn to_params(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut x = vec![0.0; dim(n)];
    for k in 0..n {
        x[k] = m[(k, k)].re;
    }
    for k in 0..n {
        for l in k + 1..n {
            let idx = pair_index(n, k, l);
            x[idx] = SQRT_2 * m[(k, l)].re;
            x[idx + 1] = SQRT_2 * m[(k, l)].im;
        }
    }
    x
}

pub fn from_params(n: usize, x: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = C64::new(x[k], 0.0);
    }
    for k in 0..n {
        for l in k + 1..n {
            let idx = pair_index(n, k, l);
            let z = C64::new(x[idx], x[idx + 1]) / SQRT_2;
            m[(k, l)] = z;
            m[(l, k)] = z.conj();
        }
    }
    m
}

/// Basis element `j`.
pub fn basis(n: usize, j: usize) -> ComplexMatrix {
    let mut x = vec![0.0; dim(n)];
    x[j] = 1.0;
    from_params(n, &x)
}

/// Coordinates of the map `V -> A V A` (the log-det Hessian for
/// `A = X^{-1}`), row-major `n^2 x n^2`, restricted to coordinates
/// `from..n^2`.
pub fn congruence_hessian(a: &ComplexMatrix, from: usize) -> Vec<f64> {
    let n = a.rows();
    let d = dim(n) - from;
    let mut h = vec![0.0; d * d];
    for j in 0..d {
        let e = basis(n, from + j);
        let y = a.matmul(&e).matmul(a);
        let col = to_params(&y);
        for i in 0..d {
            h[i * d + j] = col[from + i];
        }
    }
    // Exact symmetry for the Cholesky solve.
    for i in 0..d {
        for j in i + 1..d {
            let avg = 0.5 * (h[i * d + j] + h[j * d + i]);
            h[i * d + j] = avg;
            h[j * d + i] = avg;
        }
    }
    h
}
