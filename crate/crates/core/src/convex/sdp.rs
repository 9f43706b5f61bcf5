//! `max Tr(G W)  s.t.  [W]_qq = 1/Q,  W >= 0`.
//!
//! The diagonal is fixed, so only the `Q(Q-1)` real off-diagonal coordinates
//! are free and the barrier `-t Tr(G W) - log det W` is minimized without
//! equality constraints, starting from the analytic center `W = I/Q`. A dual
//! point `y` is recovered from the central-path condition
//! `Diag(y) - G = W^{-1}/t` and shifted into dual feasibility, which yields a
//! certified duality gap.

use crate::convex::{barrier_solve, hermitian, BarrierProblem, Derivatives};
use crate::error::{Result, WptError};
use crate::linalg::{evd_hermitian, logdet_and_inverse, ComplexMatrix, C64};

#[derive(Clone, Debug)]
pub struct SdpSolution {
    /// Optimal `W`, Hermitian PSD with unit-trace diagonal `1/Q`.
    pub matrix: ComplexMatrix,
    /// `Tr(G W)` at the returned iterate.
    pub objective: f64,
    /// Certified gap `dual - primal`, in the units of `G`.
    pub dual_gap: f64,
    pub iterations: usize,
}

struct FixedDiagonalBarrier {
    n: usize,
    /// `G` rescaled so that `Tr(G I/Q) = 1`.
    g: ComplexMatrix,
    g_params: Vec<f64>,
}

impl FixedDiagonalBarrier {
    fn full(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![1.0 / self.n as f64; self.n];
        x.extend_from_slice(y);
        x
    }
}

impl BarrierProblem for FixedDiagonalBarrier {
    fn dim(&self) -> usize {
        self.n * (self.n - 1)
    }

    fn barrier_parameter(&self) -> f64 {
        self.n as f64
    }

    fn is_interior(&self, y: &[f64]) -> bool {
        crate::linalg::cholesky(&self.matrix(y)).is_some()
    }

    fn value(&self, y: &[f64], t: f64) -> f64 {
        let w = self.matrix(y);
        let Some((logdet, _)) = logdet_and_inverse(&w) else {
            return f64::INFINITY;
        };
        let linear: f64 = self.g_params[self.n..].iter().zip(y).map(|(g, v)| g * v).sum();
        -t * linear - logdet
    }

    fn derivatives(&self, y: &[f64], t: f64) -> Derivatives {
        let n = self.n;
        let w = self.matrix(y);
        let (_, inv) = logdet_and_inverse(&w).expect("interior point");
        let inv_params = hermitian::to_params(&inv);
        let grad = (n..hermitian::dim(n))
            .map(|i| -t * self.g_params[i] - inv_params[i])
            .collect();
        let hess = hermitian::congruence_hessian(&inv, n);
        Derivatives { grad, hess }
    }

    fn matrix(&self, y: &[f64]) -> ComplexMatrix {
        hermitian::from_params(self.n, &self.full(y))
    }
}

/// `sum_i y_i / Q` after shifting `y` by `-lambda_min(Diag(y) - G)` when
/// that is negative.
fn lifted_dual_value(g: &ComplexMatrix, y: &[f64]) -> Result<f64> {
    let q = y.len();
    let mut slack = g.scaled(-1.0);
    for (i, yi) in y.iter().enumerate() {
        slack[(i, i)] += C64::new(*yi, 0.0);
    }
    let lambda_min = *evd_hermitian(&slack)?.values.last().expect("nonempty");
    Ok(y.iter().sum::<f64>() / q as f64 - lambda_min.min(0.0))
}

/// Solves the relaxed analog-combiner problem to relative gap `tol`.
pub fn solve_diag_constrained_sdp(g: &ComplexMatrix, q: usize, tol: f64) -> Result<SdpSolution> {
    if !g.is_square() || g.rows() != q || q == 0 {
        return Err(WptError::invalid(format!(
            "expected a {q}x{q} matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    if !g.is_hermitian(1e-9) {
        return Err(WptError::invalid("objective matrix is not Hermitian"));
    }
    let scale = g.trace().re / q as f64;
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(WptError::DegenerateChannel("objective matrix has zero trace".into()));
    }
    if q == 1 {
        return Ok(SdpSolution {
            matrix: ComplexMatrix::identity(1),
            objective: g[(0, 0)].re,
            dual_gap: 0.0,
            iterations: 0,
        });
    }

    let mut gn = g.scaled(1.0 / scale);
    gn.hermitianize();
    let problem = FixedDiagonalBarrier {
        n: q,
        g_params: hermitian::to_params(&gn),
        g: gn,
    };
    let y0 = vec![0.0; problem.dim()];
    let outcome = barrier_solve(&problem, y0, 1.0, tol)?;

    let mut w = problem.matrix(&outcome.x);
    w.hermitianize();
    let primal = w.matmul(&problem.g).trace().re;

    // Two dual candidates: the centering condition `Diag(y) - G = W^{-1}/t`,
    // and complementary slackness `y_i W_ii = (G W)_ii`. The first degrades
    // once W is nearly singular, the second does not need W^{-1}. Each is
    // lifted until Diag(y) - G is PSD and the smaller bound is kept.
    let (_, inv) = logdet_and_inverse(&w).expect("interior point");
    let gw = problem.g.matmul(&w);
    let from_centering: Vec<f64> = (0..q)
        .map(|i| problem.g[(i, i)].re + inv[(i, i)].re / outcome.t)
        .collect();
    let from_slackness: Vec<f64> = (0..q).map(|i| gw[(i, i)].re * q as f64).collect();
    let mut dual = f64::INFINITY;
    for y in [from_centering, from_slackness] {
        dual = dual.min(lifted_dual_value(&problem.g, &y)?);
    }

    Ok(SdpSolution {
        matrix: w,
        objective: primal * scale,
        dual_gap: (dual - primal).max(0.0) * scale,
        iterations: outcome.newton_steps,
    })
}
