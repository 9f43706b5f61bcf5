//! Beamforming with a single rectifier behind an RF combiner.
//!
//! The output power is monotone in `|w_R^H H w_T|^2` for every truncation
//! order, so the optimizers here only ever maximize that gain.

use std::f64::consts::PI;

use crate::convex::solve_diag_constrained_sdp;
use crate::dc_combining::RANK_ONE_THRESHOLD;
use crate::error::{Result, WptError};
use crate::linalg::{evd_hermitian, inner, norm, quad_form, rank1_ratio, scale, svd, ComplexMatrix, C64};
use crate::rectenna::{pout_rf_combining, TaylorCoefficients};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfScheme {
    /// Unconstrained combiner `w_R = u_1`.
    Svd,
    /// Equal-power combiner with one phase shifter per antenna.
    Analog,
}

/// Phase shifts `theta_q` in `[-pi, pi)`; the combiner weights are
/// `w_R = (1/sqrt Q) [e^{-j theta_1}, ..., e^{-j theta_Q}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalogCombiner {
    phases: Vec<f64>,
}

fn wrap_phase(theta: f64) -> f64 {
    let wrapped = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped >= PI {
        -PI
    } else {
        wrapped
    }
}

impl AnalogCombiner {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || phases.iter().any(|p| !p.is_finite()) {
            return Err(WptError::invalid("phases must be finite and nonempty"));
        }
        Ok(Self {
            phases: phases.into_iter().map(wrap_phase).collect(),
        })
    }

    /// Phases of an arbitrary vector, with the global phase removed so that
    /// `theta_1 = 0`.
    pub fn from_direction(v: &[C64]) -> Result<Self> {
        let reference = v.first().map_or(0.0, |z| z.arg());
        Self::new(v.iter().map(|z| -(z.arg() - reference)).collect())
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn weights(&self) -> Vec<C64> {
        let amp = 1.0 / (self.phases.len() as f64).sqrt();
        self.phases
            .iter()
            .map(|&t| C64::from_polar(amp, -t))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct RfResult {
    pub w_t: Vec<C64>,
    pub w_r: Vec<C64>,
    pub p_out: f64,
    pub scheme: RfScheme,
    pub combiner: Option<AnalogCombiner>,
    /// Rank-one ratio of the relaxed combiner matrix.
    pub r1_ratio: Option<f64>,
    /// Achieved `||w_R^H H||^2` over the relaxed optimum.
    pub r2_ratio: Option<f64>,
    pub sdp_objective: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalogConfig {
    pub l_randomizations: usize,
    pub seed: u64,
    /// Relative duality-gap tolerance of the SDP.
    pub tol: f64,
}

impl Default for AnalogConfig {
    fn default() -> Self {
        Self {
            l_randomizations: 100,
            seed: 0,
            tol: 1e-10,
        }
    }
}

fn check_channel(h: &ComplexMatrix, power: f64) -> Result<()> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(WptError::invalid("transmit power must be positive"));
    }
    if h.rows() == 0 || h.cols() == 0 || h.frobenius_norm() == 0.0 {
        return Err(WptError::DegenerateChannel("zero channel matrix".into()));
    }
    Ok(())
}

/// `w_R = h / ||h||`.
pub fn mrc(h: &[C64]) -> Result<Vec<C64>> {
    let n = norm(h);
    if n == 0.0 || !n.is_finite() {
        return Err(WptError::DegenerateChannel("zero receive channel".into()));
    }
    Ok(scale(h, 1.0 / n))
}

/// MRT towards the effective channel `w_R^H H`:
/// `w_T = sqrt(2P) (w_R^H H)^H / ||w_R^H H||`.
pub fn mrt_against_combiner(h: &ComplexMatrix, w_r: &[C64], power: f64) -> Result<Vec<C64>> {
    if w_r.len() != h.rows() {
        return Err(WptError::invalid("combiner length must equal receive antennas"));
    }
    // (w_R^H H)^H = H^H w_R
    let effective = h.adjoint().mul_vec(w_r);
    let n = norm(&effective);
    if n == 0.0 || !n.is_finite() {
        return Err(WptError::DegenerateChannel("effective channel w_R^H H is zero".into()));
    }
    Ok(scale(&effective, (2.0 * power).sqrt() / n))
}

/// Jointly optimal pair `w_T = sqrt(2P) v_1`, `w_R = u_1`.
pub fn optimize_rf_svd(
    h: &ComplexMatrix,
    power: f64,
    coeffs: &TaylorCoefficients,
    r_load: f64,
) -> Result<RfResult> {
    check_channel(h, power)?;
    let s = svd(h)?;
    let w_t = scale(&s.v.column(0), (2.0 * power).sqrt());
    let w_r = s.u.column(0);
    let p_out = pout_rf_combining(h, &w_t, &w_r, coeffs, r_load)?;
    Ok(RfResult {
        w_t,
        w_r,
        p_out,
        scheme: RfScheme::Svd,
        combiner: None,
        r1_ratio: None,
        r2_ratio: None,
        sdp_objective: None,
    })
}

/// Analog receive beamforming: relax `max ||w_R^H H||^2` over unit-modulus
/// weights to an SDP, extract a phase vector (directly when the relaxation is
/// rank one, otherwise by Gaussian randomization), then MRT.
pub fn optimize_rf_analog(
    h: &ComplexMatrix,
    power: f64,
    coeffs: &TaylorCoefficients,
    r_load: f64,
    cfg: &AnalogConfig,
) -> Result<RfResult> {
    check_channel(h, power)?;
    if cfg.l_randomizations == 0 {
        return Err(WptError::Config("l_randomizations must be at least 1".into()));
    }
    let q = h.rows();
    let mut g = h.matmul(&h.adjoint());
    g.hermitianize();

    let (combiner, r1, r2, objective) = if q == 1 {
        let c = AnalogCombiner::new(vec![0.0])?;
        (c, 1.0, 1.0, g[(0, 0)].re)
    } else {
        let sdp = solve_diag_constrained_sdp(&g, q, cfg.tol)?;
        let r1 = rank1_ratio(&sdp.matrix)?;
        let combiner = if r1 > RANK_ONE_THRESHOLD {
            let eig = evd_hermitian(&sdp.matrix)?;
            AnalogCombiner::from_direction(&eig.top_vector())?
        } else {
            randomized_phases(&sdp.matrix, &g, cfg)?
        };
        let achieved = quad_form(&g, &combiner.weights());
        (combiner, r1, achieved / sdp.objective, sdp.objective)
    };

    let w_r = combiner.weights();
    let w_t = mrt_against_combiner(h, &w_r, power)?;
    let p_out = pout_rf_combining(h, &w_t, &w_r, coeffs, r_load)?;
    Ok(RfResult {
        w_t,
        w_r,
        p_out,
        scheme: RfScheme::Analog,
        combiner: Some(combiner),
        r1_ratio: Some(r1),
        r2_ratio: Some(r2),
        sdp_objective: Some(objective),
    })
}

fn randomized_phases(w: &ComplexMatrix, g: &ComplexMatrix, cfg: &AnalogConfig) -> Result<AnalogCombiner> {
    let q = w.rows();
    let eig = evd_hermitian(w)?;
    let factor = ComplexMatrix::from_fn(q, q, |i, j| eig.vectors[(i, j)] * eig.values[j].max(0.0).sqrt());
    let mut stream = rng::stream(cfg.seed, 0);
    let mut best: Option<(f64, AnalogCombiner)> = None;
    for _ in 0..cfg.l_randomizations {
        let n = rng::cscg_vector(&mut stream, q);
        // w_R = (1/sqrt Q) e^{j arg(U S^{1/2} n)}
        let direction = factor.mul_vec(&n);
        let cand = AnalogCombiner::from_direction(&direction)?;
        let value = quad_form(g, &cand.weights());
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, cand));
        }
    }
    Ok(best.expect("at least one randomization").1)
}

/// `|w_R^H H w_T|^2`.
pub fn combined_gain(h: &ComplexMatrix, w_t: &[C64], w_r: &[C64]) -> f64 {
    inner(w_r, &h.mul_vec(w_t)).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rectenna::{make_coefficients, RectennaParams};

    fn coeffs() -> TaylorCoefficients {
        make_coefficients(&RectennaParams::default()).unwrap()
    }

    #[test]
    fn combiner_weights_have_unit_norm() {
        let c = AnalogCombiner::new(vec![0.1, -3.0, 2.5, 7.0]).unwrap();
        let w = c.weights();
        assert!((norm(&w) - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
        assert!(c.phases().iter().all(|&t| (-PI..PI).contains(&t)));
    }

    #[test]
    fn from_direction_fixes_first_phase() {
        let v = vec![C64::from_polar(2.0, 1.0), C64::from_polar(0.5, -2.0)];
        let c = AnalogCombiner::from_direction(&v).unwrap();
        assert_eq!(c.phases()[0], 0.0);
        // w_R must be parallel in phase to v up to a global rotation.
        let w = c.weights();
        let rel = (w[1] / w[0]).arg() - (v[1] / v[0]).arg();
        assert!(wrap_phase(rel).abs() < 1e-12);
    }

    #[test]
    fn svd_on_diagonal_channel() {
        let h = ComplexMatrix::from_diag(&[2.0, 1.0]);
        let p = 0.25;
        let res = optimize_rf_svd(&h, p, &coeffs(), 1.0).unwrap();
        let gain = combined_gain(&h, &res.w_t, &res.w_r);
        assert!((gain - 8.0 * p).abs() < 1e-12);
        assert!((res.w_r[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mrc_properties() {
        let e1 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert_eq!(mrc(&e1).unwrap(), e1);
        assert!(mrc(&[C64::new(0.0, 0.0)]).is_err());
        let h = vec![C64::new(0.3, -1.0), C64::new(2.0, 0.5)];
        let w = mrc(&h).unwrap();
        assert!((inner(&w, &h).norm_sqr() - norm(&h).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn mrt_rejects_orthogonal_combiner() {
        let h = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let w_r = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        assert!(matches!(
            mrt_against_combiner(&h, &w_r, 1.0),
            Err(WptError::DegenerateChannel(_))
        ));
    }

    #[test]
    fn analog_single_antenna_is_exact() {
        let h = ComplexMatrix::from_rows(&[vec![C64::new(1e-3, -2e-3), C64::new(5e-4, 0.0)]]).unwrap();
        let a = optimize_rf_analog(&h, 2.0, &coeffs(), 5000.0, &AnalogConfig::default()).unwrap();
        let s = optimize_rf_svd(&h, 2.0, &coeffs(), 5000.0).unwrap();
        assert_eq!(a.r1_ratio, Some(1.0));
        assert_eq!(a.r2_ratio, Some(1.0));
        assert!((a.p_out - s.p_out).abs() < 1e-12 * s.p_out);
    }
}
