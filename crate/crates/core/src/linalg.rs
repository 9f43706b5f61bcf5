//! Dense complex linear algebra for small matrices.
//!
//! Everything here targets matrices of at most a few dozen rows. Hermitian
//! eigendecomposition uses cyclic two-sided Jacobi rotations and the SVD uses
//! one-sided (Hestenes) Jacobi, both of which give high relative accuracy at
//! these sizes without any external LAPACK dependency.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Result, WptError};

pub type C64 = Complex64;

const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(WptError::invalid(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WptError::invalid("matrix has non-finite entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(WptError::invalid("ragged rows"));
        }
        Self::from_row_major(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `v v^H`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[C64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Self {
        self.add(&rhs.scaled(-1.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let bound = tol * self.frobenius_norm().max(f64::MIN_POSITIVE);
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > bound {
                    return false;
                }
            }
        }
        true
    }

    /// Symmetrizes in place: `(A + A^H) / 2`.
    pub fn hermitianize(&mut self) {
        let n = self.rows;
        for i in 0..n {
            self[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `x^H y`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm1(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).sum()
}

pub fn scale(x: &[C64], s: f64) -> Vec<C64> {
    x.iter().map(|z| z * s).collect()
}

/// `w^H A w` for Hermitian `A`, real part only.
pub fn quad_form(a: &ComplexMatrix, w: &[C64]) -> f64 {
    inner(w, &a.mul_vec(w)).re
}

/// Unitary 2x2 rotation `[[c, s], [-s conj(ph), c conj(ph)]]` that
/// diagonalizes the Hermitian block `[[app, apq], [conj(apq), aqq]]`.
#[derive(Clone, Copy, Debug)]
struct Rotation {
    c: f64,
    s: f64,
    phase: C64,
}

impl Rotation {
    fn annihilating(app: f64, aqq: f64, apq: C64) -> Self {
        let mag = apq.norm();
        let phase = apq / mag;
        let theta = (aqq - app) / (2.0 * mag);
        let t = if theta.is_infinite() {
            0.0
        } else {
            let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
            sign / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Rotation { c, s: t * c, phase }
    }

    /// Entries `(g_pp, g_pq, g_qp, g_qq)`.
    fn entries(&self) -> (C64, C64, C64, C64) {
        let pc = self.phase.conj();
        (
            C64::new(self.c, 0.0),
            C64::new(self.s, 0.0),
            pc * (-self.s),
            pc * self.c,
        )
    }

    /// `A <- A G` on columns p, q.
    fn apply_right(&self, a: &mut ComplexMatrix, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..a.rows {
            let akp = a[(k, p)];
            let akq = a[(k, q)];
            a[(k, p)] = akp * gpp + akq * gqp;
            a[(k, q)] = akp * gpq + akq * gqq;
        }
    }

    /// `A <- G^H A` on rows p, q.
    fn apply_left_adjoint(&self, a: &mut ComplexMatrix, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..a.cols {
            let apk = a[(p, k)];
            let aqk = a[(q, k)];
            a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
            a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
        }
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues descending. Column `k` of
/// `vectors` pairs with `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn top_vector(&self) -> Vec<C64> {
        self.vectors.column(0)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diag(&self.values);
        self.vectors.matmul(&d).matmul(&self.vectors.adjoint())
    }
}

pub fn evd_hermitian(w: &ComplexMatrix) -> Result<HermitianEigen> {
    if !w.is_square() {
        return Err(WptError::invalid("eigendecomposition needs a square matrix"));
    }
    if w.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(WptError::invalid("matrix has non-finite entries"));
    }
    if !w.is_hermitian(1e-9) {
        return Err(WptError::invalid("matrix is not Hermitian"));
    }
    let n = w.rows();
    let mut a = w.clone();
    a.hermitianize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if a.off_diagonal_norm() <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.norm() <= 1e-300 {
                        continue;
                    }
                    let rot = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, apq);
                    rot.apply_right(&mut a, p, q);
                    rot.apply_left_adjoint(&mut a, p, q);
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                    rot.apply_right(&mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Thin singular value decomposition `A = U diag(s) V^H` with
/// `k = min(rows, cols)` singular triplets in descending order.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let mut us = self.u.clone();
        for j in 0..k {
            for i in 0..us.rows() {
                us[(i, j)] *= self.singular_values[j];
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(WptError::invalid("svd of an empty matrix"));
    }
    if a.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(WptError::invalid("matrix has non-finite entries"));
    }
    if a.rows() >= a.cols() {
        Ok(one_sided_jacobi(a))
    } else {
        let t = one_sided_jacobi(&a.adjoint());
        Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

/// Hestenes one-sided Jacobi for `rows >= cols`.
fn one_sided_jacobi(a: &ComplexMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for i in 0..m {
                    alpha += w[(i, p)].norm_sqr();
                    beta += w[(i, q)].norm_sqr();
                    gamma += w[(i, p)].conj() * w[(i, q)];
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = norms[order[0]];
    let cutoff = smax * 1e-14 * (m.max(n) as f64);

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vs = ComplexMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let mut filled = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        vs.set_column(k, &v.column(j));
        if norms[j] > cutoff && norms[j] > 0.0 {
            s.push(norms[j]);
            u.set_column(k, &scale(&w.column(j), 1.0 / norms[j]));
            filled.push(k);
        } else {
            s.push(0.0);
        }
    }
    complete_orthonormal_columns(&mut u, &filled);
    Svd {
        u,
        singular_values: s,
        v: vs,
    }
}

/// Fills the columns of `u` not listed in `filled` with unit vectors
/// orthogonal to all others (Gram-Schmidt over the canonical basis).
fn complete_orthonormal_columns(u: &mut ComplexMatrix, filled: &[usize]) {
    let m = u.rows();
    let mut basis: Vec<Vec<C64>> = filled.iter().map(|&k| u.column(k)).collect();
    let mut next_canonical = 0;
    for k in 0..u.cols() {
        if filled.contains(&k) {
            continue;
        }
        while next_canonical < m {
            let mut cand = vec![C64::new(0.0, 0.0); m];
            cand[next_canonical] = C64::new(1.0, 0.0);
            next_canonical += 1;
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b, &cand);
                    for (c, bi) in cand.iter_mut().zip(b) {
                        *c -= proj * bi;
                    }
                }
            }
            let nn = norm(&cand);
            if nn > 1e-8 {
                let cand = scale(&cand, 1.0 / nn);
                u.set_column(k, &cand);
                basis.push(cand);
                break;
            }
        }
    }
}

/// `lambda_max / sum(lambda)` of a Hermitian PSD matrix; negative eigenvalues
/// from round-off are clamped to zero.
pub fn rank1_ratio(w: &ComplexMatrix) -> Result<f64> {
    let eig = evd_hermitian(w)?;
    let clamped: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(WptError::UndefinedRatio(
            "rank-1 ratio of a matrix with zero trace".into(),
        ));
    }
    Ok((clamped[0] / total).clamp(0.0, 1.0))
}

/// Lower Cholesky factor of a Hermitian positive definite matrix, or `None`
/// if a pivot is not strictly positive.
pub fn cholesky(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// `log det A` and `A^{-1}` for Hermitian positive definite `A`.
pub fn logdet_and_inverse(a: &ComplexMatrix) -> Option<(f64, ComplexMatrix)> {
    let l = cholesky(a)?;
    let n = a.rows();
    let logdet = 2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>();
    // Invert L by forward substitution, then A^{-1} = L^{-H} L^{-1}.
    let mut linv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        linv[(j, j)] = C64::new(1.0 / l[(j, j)].re, 0.0);
        for i in j + 1..n {
            let mut s = C64::new(0.0, 0.0);
            for k in j..i {
                s += l[(i, k)] * linv[(k, j)];
            }
            linv[(i, j)] = -s / l[(i, i)].re;
        }
    }
    let mut inv = linv.adjoint().matmul(&linv);
    inv.hermitianize();
    Some((logdet, inv))
}

/// Solves `A x = b` for a real symmetric positive definite `A` (row-major,
/// `n x n`). Returns `None` when `A` is not numerically positive definite.
pub fn solve_spd(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}
