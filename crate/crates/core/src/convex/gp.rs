//! Log-transformed GP subproblem of the DC-combining iteration.
//!
//! For fixed AM-GM weights `gamma`, the subproblem is
//!
//! ```text
//! min  -t0~
//! s.t. Tr(W) <= 2P,  W >= 0,
//!      exp(r~_q) <= h_q W h_q^H,
//!      log c1 + t0~ + sum_q alpha_q r~_q <= 0.
//! ```
//!
//! Every `alpha_q` is non-positive, so the last two constraints are tight at
//! the optimum and `t0~` and `r~` can be eliminated: the problem becomes
//! maximizing `sum_q a_q log(h_q W h_q^H)` with `a_q = -alpha_q` over the
//! scaled spectraplex. That form is solved in normalized coordinates
//! `W = 2P X`, `h_q -> h_q / |h_q|`, which makes it independent of the
//! absolute power and path-loss scale.

use crate::convex::{barrier_solve, hermitian, BarrierProblem, Derivatives};
use crate::error::{Result, WptError};
use crate::linalg::{logdet_and_inverse, norm, quad_form, ComplexMatrix, C64};
use crate::rectenna::PosynomialForm;

#[derive(Clone, Debug)]
pub struct GpSubproblem {
    /// `Q x M`; row `q` is `h_q`.
    pub channel: ComplexMatrix,
    /// Transmit power `P` in watts (`Tr W <= 2P`).
    pub power_budget: f64,
    /// AM-GM weights, one per monomial.
    pub gamma: Vec<f64>,
    pub posynomial: PosynomialForm,
}

impl GpSubproblem {
    /// `log c1 = -sum_k gamma_k log(rho_k / gamma_k)`; zero weights drop out.
    pub fn log_c1(&self) -> f64 {
        -self
            .posynomial
            .monomials()
            .iter()
            .zip(&self.gamma)
            .filter(|(_, &g)| g > 0.0)
            .map(|(m, &g)| g * (m.coeff.ln() - g.ln()))
            .sum::<f64>()
    }

    /// `alpha_q = -sum_k xi_qk gamma_k`.
    pub fn alpha(&self) -> Vec<f64> {
        let mut alpha = vec![0.0; self.posynomial.antennas()];
        for (m, &g) in self.posynomial.monomials().iter().zip(&self.gamma) {
            alpha[m.antenna] -= m.exponent * g;
        }
        alpha
    }

    fn validate(&self) -> Result<()> {
        if self.channel.rows() != self.posynomial.antennas() {
            return Err(WptError::invalid("posynomial and channel disagree on Q"));
        }
        if self.gamma.len() != self.posynomial.len() {
            return Err(WptError::invalid("one gamma weight per monomial required"));
        }
        if self.gamma.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
            return Err(WptError::invalid("gamma weights must be non-negative"));
        }
        let sum: f64 = self.gamma.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(WptError::invalid(format!("gamma weights sum to {sum}, not 1")));
        }
        if !(self.power_budget > 0.0) || !self.power_budget.is_finite() {
            return Err(WptError::invalid("power budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GpSolution {
    /// Optimal `W_T`, Hermitian PSD with `Tr W_T <= 2P`.
    pub w_t: ComplexMatrix,
    /// `r_q = h_q W_T h_q^H`.
    pub r: Vec<f64>,
    /// `t0~ = log t0`.
    pub log_t0: f64,
    /// Bound on the subproblem optimality gap in the `t0~` objective.
    pub gap: f64,
    pub newton_steps: usize,
}

impl GpSolution {
    pub fn t0(&self) -> f64 {
        self.log_t0.exp()
    }
}

/// `t (-sum a_q log(g_q^H X g_q)) - log det X - log(1 - Tr X)`.
struct WeightedLogBarrier {
    n: usize,
    /// `g_q = conj(h_q) / |h_q|` as column vectors, active antennas only.
    directions: Vec<Vec<C64>>,
    weights: Vec<f64>,
    /// Coordinates of `g_q g_q^H`.
    direction_params: Vec<Vec<f64>>,
    identity_params: Vec<f64>,
}

impl WeightedLogBarrier {
    fn gains(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.directions.iter().map(|g| quad_form(x, g)).collect()
    }
}

impl BarrierProblem for WeightedLogBarrier {
    fn dim(&self) -> usize {
        hermitian::dim(self.n)
    }

    fn barrier_parameter(&self) -> f64 {
        self.n as f64 + 1.0
    }

    fn is_interior(&self, x: &[f64]) -> bool {
        let m = hermitian::from_params(self.n, x);
        let slack = 1.0 - m.trace().re;
        slack > 0.0
            && crate::linalg::cholesky(&m).is_some()
            && self.gains(&m).iter().all(|&r| r > 0.0)
    }

    fn value(&self, x: &[f64], t: f64) -> f64 {
        let m = hermitian::from_params(self.n, x);
        let Some((logdet, _)) = logdet_and_inverse(&m) else {
            return f64::INFINITY;
        };
        let weighted: f64 = self.weights.iter().zip(self.gains(&m)).map(|(a, r)| a * r.ln()).sum();
        -t * weighted - logdet - (1.0 - m.trace().re).ln()
    }

    fn derivatives(&self, x: &[f64], t: f64) -> Derivatives {
        let n = self.n;
        let d = self.dim();
        let m = hermitian::from_params(n, x);
        let slack = 1.0 - m.trace().re;
        let (_, inv) = logdet_and_inverse(&m).expect("interior point");
        let gains = self.gains(&m);

        let inv_params = hermitian::to_params(&inv);
        let mut grad: Vec<f64> = inv_params.iter().map(|v| -v).collect();
        for (gi, e) in grad.iter_mut().zip(&self.identity_params) {
            *gi += e / slack;
        }
        let mut hess = hermitian::congruence_hessian(&inv, 0);
        for ((b, &a), &r) in self.direction_params.iter().zip(&self.weights).zip(&gains) {
            let gscale = -t * a / r;
            let hscale = t * a / (r * r);
            for i in 0..d {
                grad[i] += gscale * b[i];
                if b[i] == 0.0 {
                    continue;
                }
                for j in 0..d {
                    hess[i * d + j] += hscale * b[i] * b[j];
                }
            }
        }
        let s2 = slack * slack;
        for i in 0..d {
            let ei = self.identity_params[i];
            if ei == 0.0 {
                continue;
            }
            for j in 0..d {
                hess[i * d + j] += ei * self.identity_params[j] / s2;
            }
        }
        Derivatives { grad, hess }
    }

    fn matrix(&self, x: &[f64]) -> ComplexMatrix {
        hermitian::from_params(self.n, x)
    }
}

/// Solves the subproblem to a duality-gap bound of `tol` on `t0~`.
pub fn solve_gp_subproblem(p: &GpSubproblem, tol: f64) -> Result<GpSolution> {
    p.validate()?;
    let m = p.channel.cols();
    let alpha = p.alpha();
    let log_c1 = p.log_c1();

    let mut directions = Vec::new();
    let mut weights = Vec::new();
    let mut row_norms = Vec::new();
    for (q, &aq) in alpha.iter().enumerate() {
        let row = p.channel.row(q);
        let rn = norm(row);
        row_norms.push(rn);
        let weight = -aq;
        if weight <= 0.0 {
            continue;
        }
        if rn == 0.0 || !rn.is_finite() {
            return Err(WptError::Infeasible(format!(
                "antenna {q} has a zero channel row but positive weight"
            )));
        }
        directions.push(row.iter().map(|z| z.conj() / rn).collect::<Vec<C64>>());
        weights.push(weight);
    }
    if weights.is_empty() {
        return Err(WptError::Infeasible("all monomial weights vanish".into()));
    }
    let direction_params = directions
        .iter()
        .map(|g| hermitian::to_params(&ComplexMatrix::outer(g)))
        .collect();
    let problem = WeightedLogBarrier {
        n: m,
        directions,
        direction_params,
        identity_params: hermitian::to_params(&ComplexMatrix::identity(m)),
        weights: weights.clone(),
    };

    let x0 = hermitian::to_params(&ComplexMatrix::identity(m).scaled(1.0 / (m as f64 + 1.0)));
    let outcome = barrier_solve(&problem, x0, 1.0, tol)?;

    let mut x = hermitian::from_params(m, &outcome.x);
    x.hermitianize();
    let w_t = x.scaled(2.0 * p.power_budget);
    let r: Vec<f64> = (0..p.channel.rows())
        .map(|q| {
            let g: Vec<C64> = p.channel.row(q).iter().map(|z| z.conj()).collect();
            quad_form(&w_t, &g).max(0.0)
        })
        .collect();
    let log_t0 = -log_c1
        + alpha
            .iter()
            .zip(&r)
            .filter(|(&a, _)| a < 0.0)
            .map(|(&a, &rq)| -a * rq.ln())
            .sum::<f64>();
    Ok(GpSolution {
        w_t,
        r,
        log_t0,
        gap: outcome.gap_bound(problem.barrier_parameter()),
        newton_steps: outcome.newton_steps,
    })
}
