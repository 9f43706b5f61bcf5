//! Transmit beamforming with one rectifier per receive antenna.
//!
//! [`optimize_dc`] runs the successive convex approximation: at each outer
//! iteration the posynomial objective `sum_k g_k(r)` is bounded below by the
//! AM-GM monomial that is tight at the previous gains, the resulting
//! log-convex subproblem over the relaxed matrix `W_T` is solved, and the
//! loop stops once the monomial value settles. A rank-one `W_T` gives the
//! beamformer directly; otherwise Gaussian randomization picks the best of
//! `L` candidates drawn from `W_T`.

use crate::convex::{solve_gp_subproblem, GpSubproblem};
use crate::error::{Result, WptError};
use crate::linalg::{evd_hermitian, norm, scale, svd, ComplexMatrix, C64};
use crate::rectenna::{per_antenna_gains, posynomial_form, pout_dc_combining, PosynomialForm, TaylorCoefficients};
use crate::rng;

/// `r1_ratio` above this counts as rank one.
pub const RANK_ONE_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct DcOptConfig {
    /// Relative change in `t0` that ends the outer loop.
    pub epsilon: f64,
    pub i_max: usize,
    /// Gaussian randomization candidates `L`.
    pub l_randomizations: usize,
    pub randomization_seed: u64,
    /// Duality-gap tolerance of each subproblem.
    pub solver_tol: f64,
}

impl Default for DcOptConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            i_max: 50,
            l_randomizations: 100,
            randomization_seed: 0,
            solver_tol: 1e-8,
        }
    }
}

impl DcOptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(WptError::Config("epsilon must be positive".into()));
        }
        if self.i_max == 0 {
            return Err(WptError::Config("i_max must be at least 1".into()));
        }
        if self.l_randomizations == 0 {
            return Err(WptError::Config("l_randomizations must be at least 1".into()));
        }
        if !(self.solver_tol > 0.0) {
            return Err(WptError::Config("solver_tol must be positive".into()));
        }
        Ok(())
    }
}

/// How the final beamformer was extracted from `W_T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extraction {
    /// Scaled principal eigenvector of a rank-one `W_T`.
    RankOne,
    GaussianRandomization,
    /// Neither candidate beat the SVD starting point, which is returned.
    Initial,
}

#[derive(Clone, Debug)]
pub struct DcResult {
    pub w_t: Vec<C64>,
    pub p_out: f64,
    /// Accepted outer iterations.
    pub iterations: usize,
    pub converged: bool,
    pub rank1: bool,
    pub r1_ratio: f64,
    /// `sum_k g_k(r^(i))` for the starting point and each accepted iterate.
    pub objective_trace: Vec<f64>,
    /// Relaxed solution `W_T*`.
    pub w_matrix: ComplexMatrix,
    pub extraction: Extraction,
}

/// `gamma_k = g_k(r) / sum_k g_k(r)`.
pub fn update_gamma(r: &[f64], posynomial: &PosynomialForm) -> Result<Vec<f64>> {
    if r.len() != posynomial.antennas() {
        return Err(WptError::invalid("one gain per antenna required"));
    }
    if let Some(bad) = r.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
        return Err(WptError::invalid(format!("gains must be strictly positive, got {bad}")));
    }
    let terms = posynomial.terms(r);
    let total: f64 = terms.iter().sum();
    Ok(terms.iter().map(|g| g / total).collect())
}

/// `w_T = sqrt(2P) v_1`, the top right singular vector at full power. Ties
/// between equal singular values resolve to the first triplet.
pub fn svd_transmit_baseline(h: &ComplexMatrix, power: f64) -> Result<Vec<C64>> {
    if h.frobenius_norm() == 0.0 {
        return Err(WptError::DegenerateChannel("zero channel matrix".into()));
    }
    let s = svd(h)?;
    Ok(scale(&s.v.column(0), (2.0 * power).sqrt()))
}

fn check_inputs(h: &ComplexMatrix, power: f64) -> Result<()> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(WptError::invalid("transmit power must be positive"));
    }
    if h.rows() == 0 || h.cols() == 0 {
        return Err(WptError::invalid("empty channel"));
    }
    if h.frobenius_norm() == 0.0 {
        return Err(WptError::DegenerateChannel("zero channel matrix".into()));
    }
    Ok(())
}

pub fn optimize_dc(
    h: &ComplexMatrix,
    power: f64,
    coeffs: &TaylorCoefficients,
    r_load: f64,
    cfg: &DcOptConfig,
) -> Result<DcResult> {
    check_inputs(h, power)?;
    cfg.validate()?;

    // Antennas with a zero channel row never receive power; they are left
    // out of the subproblem.
    let active: Vec<usize> = (0..h.rows()).filter(|&q| norm(h.row(q)) > 0.0).collect();
    let h_active = ComplexMatrix::from_fn(active.len(), h.cols(), |i, j| h[(active[i], j)]);
    let posynomial = posynomial_form(&h_active, coeffs, r_load);

    let w_init = svd_transmit_baseline(h, power)?;
    let p_init = pout_dc_combining(h, &w_init, coeffs, r_load)?;
    let mut r = per_antenna_gains(&h_active, &w_init)?;
    let floor = r.iter().copied().fold(0.0, f64::max) * 1e-12;
    for x in &mut r {
        *x = x.max(floor).max(f64::MIN_POSITIVE);
    }

    let mut w_matrix = ComplexMatrix::outer(&w_init);
    let mut trace = vec![posynomial.evaluate(&r)];
    let mut t0_prev = trace[0];
    let mut converged = false;
    let mut iterations = 0;
    for i in 1..=cfg.i_max {
        let gamma = update_gamma(&r, &posynomial)?;
        let sub = GpSubproblem {
            channel: h_active.clone(),
            power_budget: power,
            gamma,
            posynomial: posynomial.clone(),
        };
        let sol = solve_gp_subproblem(&sub, cfg.solver_tol).map_err(|e| WptError::DcSubproblem {
            iteration: i,
            trace: trace.clone(),
            source: Box::new(e),
        })?;
        let value = posynomial.evaluate(&sol.r);
        if value < *trace.last().expect("nonempty") || sol.r.iter().any(|&x| !(x > 0.0)) {
            // No ascent left at solver precision.
            converged = true;
            break;
        }
        iterations = i;
        r = sol.r;
        w_matrix = sol.w_t;
        trace.push(value);
        let t0 = sol.log_t0.exp();
        let change = (t0 - t0_prev).abs();
        t0_prev = t0;
        if change < cfg.epsilon * t0.abs() {
            converged = true;
            break;
        }
    }

    let eig = evd_hermitian(&w_matrix)?;
    let clamped_sum: f64 = eig.values.iter().map(|l| l.max(0.0)).sum();
    let r1_ratio = if clamped_sum > 0.0 { eig.values[0].max(0.0) / clamped_sum } else { 0.0 };
    let rank1 = r1_ratio > RANK_ONE_THRESHOLD;
    let full = (2.0 * power).sqrt();

    let (mut w_t, mut extraction) = if rank1 {
        (scale(&eig.top_vector(), full), Extraction::RankOne)
    } else {
        let m = h.cols();
        let factor = ComplexMatrix::from_fn(m, m, |i, j| eig.vectors[(i, j)] * eig.values[j].max(0.0).sqrt());
        let mut stream = rng::stream(cfg.randomization_seed, 0);
        let mut best: Option<(f64, Vec<C64>)> = None;
        for _ in 0..cfg.l_randomizations {
            let n = rng::cscg_vector(&mut stream, m);
            let v = factor.mul_vec(&n);
            let nv = norm(&v);
            if nv == 0.0 {
                continue;
            }
            let cand = scale(&v, full / nv);
            let p = pout_dc_combining(h, &cand, coeffs, r_load)?;
            if best.as_ref().is_none_or(|(bp, _)| p > *bp) {
                best = Some((p, cand));
            }
        }
        match best {
            Some((_, w)) => (w, Extraction::GaussianRandomization),
            None => (w_init.clone(), Extraction::Initial),
        }
    };
    let mut p_out = pout_dc_combining(h, &w_t, coeffs, r_load)?;
    if p_out < p_init {
        w_t = w_init;
        p_out = p_init;
        extraction = Extraction::Initial;
    }

    Ok(DcResult {
        w_t,
        p_out,
        iterations,
        converged,
        rank1,
        r1_ratio,
        objective_trace: trace,
        w_matrix,
        extraction,
    })
}
