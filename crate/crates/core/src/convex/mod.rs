//! Small dense interior-point solvers.
//!
//! Both problems carry a Hermitian PSD matrix variable and are solved by a
//! primal log-barrier method: `-log det X` on the cone, `-log` on the scalar
//! inequalities, Newton centering with backtracking, and a geometric increase of the
//! barrier weight `t` until the central-path gap bound `nu / t` is below the
//! requested tolerance. Hermitian `n x n` matrices are parameterized by `n^2`
//! real coordinates in an orthonormal basis (see [`hermitian`]), so Newton
//! systems are small real SPD solves.

pub mod gp;
pub mod hermitian;
pub mod sdp;

pub use gp::{solve_gp_subproblem, GpSolution, GpSubproblem};
pub use sdp::{solve_diag_constrained_sdp, SdpSolution};

use crate::error::{Result, WptError};
use crate::linalg::{solve_spd, ComplexMatrix};

/// Increase factor for the barrier weight.
const T_GROWTH: f64 = 50.0;
const MAX_CENTERING_STEPS: usize = 80;
const MAX_OUTER_STEPS: usize = 80;
/// Newton decrement squared below which a point counts as centered.
const CENTERED: f64 = 1e-10;
/// Accept an imperfect centering when round-off stalls Newton here.
const NEARLY_CENTERED: f64 = 1e-6;

pub(crate) struct Derivatives {
    pub grad: Vec<f64>,
    /// Row-major `dim x dim`.
    pub hess: Vec<f64>,
}

/// A barrier-augmented objective `t f0(x) + phi(x)`.
pub(crate) trait BarrierProblem {
    fn dim(&self) -> usize;
    /// Self-concordance parameter of `phi`; bounds the gap by `nu / t`.
    fn barrier_parameter(&self) -> f64;
    /// Whether `x` is strictly inside the domain.
    fn is_interior(&self, x: &[f64]) -> bool;
    /// `t f0(x) + phi(x)` at an interior point.
    fn value(&self, x: &[f64], t: f64) -> f64;
    /// Gradient and Hessian at an interior point.
    fn derivatives(&self, x: &[f64], t: f64) -> Derivatives;
    /// Current matrix iterate, reported on non-convergence.
    fn matrix(&self, x: &[f64]) -> ComplexMatrix;
}

#[derive(Clone, Debug)]
pub(crate) struct BarrierOutcome {
    pub x: Vec<f64>,
    pub t: f64,
    pub newton_steps: usize,
}

impl BarrierOutcome {
    pub fn gap_bound(&self, nu: f64) -> f64 {
        nu / self.t
    }
}

fn newton_direction(d: &Derivatives, n: usize) -> Option<Vec<f64>> {
    let rhs: Vec<f64> = d.grad.iter().map(|g| -g).collect();
    if let Some(dx) = solve_spd(&d.hess, n, &rhs) {
        return Some(dx);
    }
    // Round-off can push a tiny eigenvalue of the Hessian negative late in the
    // path; a diagonal shift relative to the largest pivot recovers a descent
    // direction.
    let max_diag = (0..n).map(|i| d.hess[i * n + i].abs()).fold(0.0, f64::max);
    let mut shift = 1e-14 * max_diag.max(1e-300);
    for _ in 0..30 {
        let mut h = d.hess.clone();
        for i in 0..n {
            h[i * n + i] += shift;
        }
        if let Some(dx) = solve_spd(&h, n, &rhs) {
            return Some(dx);
        }
        shift *= 10.0;
    }
    None
}

/// Runs the barrier method from a strictly interior `x0`.
pub(crate) fn barrier_solve<P: BarrierProblem>(
    problem: &P,
    x0: Vec<f64>,
    t0: f64,
    gap_tol: f64,
) -> Result<BarrierOutcome> {
    let n = problem.dim();
    let nu = problem.barrier_parameter();
    debug_assert!(problem.is_interior(&x0));
    let mut x = x0;
    let mut t = t0;
    let mut steps = 0;
    if n == 0 {
        return Ok(BarrierOutcome { x, t: f64::INFINITY, newton_steps: 0 });
    }
    let fail = |x: &[f64], t: f64, steps: usize| WptError::NonConvergence {
        iterations: steps,
        gap: nu / t,
        best: Some(Box::new(problem.matrix(x))),
    };

    for _ in 0..MAX_OUTER_STEPS {
        let mut decrement_sq = f64::INFINITY;
        for _ in 0..MAX_CENTERING_STEPS {
            let previous = decrement_sq;
            let d = problem.derivatives(&x, t);
            let Some(dx) = newton_direction(&d, n) else {
                break;
            };
            decrement_sq = -d.grad.iter().zip(&dx).map(|(g, s)| g * s).sum::<f64>();
            if !decrement_sq.is_finite() {
                return Err(fail(&x, t, steps));
            }
            // Stop at the round-off floor too: Newton no longer contracts.
            if decrement_sq <= CENTERED || (decrement_sq <= NEARLY_CENTERED && decrement_sq > 0.25 * previous) {
                break;
            }
            // Full steps inside the quadratic region, where value
            // comparisons drown in round-off; backtracking elsewhere.
            let quadratic = decrement_sq < 0.0625;
            let f0 = problem.value(&x, t);
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let cand: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + step * b).collect();
                if problem.is_interior(&cand)
                    && (quadratic || problem.value(&cand, t) <= f0 - 0.25 * step * decrement_sq)
                {
                    x = cand;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            steps += 1;
            if !moved {
                break;
            }
        }
        if !(decrement_sq <= NEARLY_CENTERED) {
            return Err(fail(&x, t, steps));
        }
        if nu / t < gap_tol {
            return Ok(BarrierOutcome { x, t, newton_steps: steps });
        }
        t *= T_GROWTH;
    }
    Err(fail(&x, t, steps))
}
