//! Truncated-Taylor rectenna model.
//!
//! The rectifier output voltage is `v_out = sum_{i even, 2..n0} beta_i *
//! E{y(t)^i}`. For a single-tone input of complex amplitude `a`,
//! `E{y(t)^i} = zeta_i |a|^i`, so everything reduces to a polynomial in the
//! received amplitude. Channels and beamformers are scaled so that
//! `|a|^2 / 2` is the received RF power in watts.

use crate::error::{Result, WptError};
use crate::linalg::{inner, norm, ComplexMatrix, C64};

/// Highest even truncation order with a tabulated `zeta_i`.
pub const MAX_ORDER: u32 = 6;

/// Diode and circuit constants.
#[derive(Clone, Debug, PartialEq)]
pub struct RectennaParams {
    /// Thermal voltage in volts.
    pub v_t: f64,
    pub n_ideality: f64,
    /// Antenna resistance in ohms.
    pub r_ant: f64,
    /// Load resistance in ohms.
    pub r_load: f64,
    /// Even truncation order of the Taylor expansion.
    pub n0: u32,
    /// Reverse saturation current in amps, only used for the current-model
    /// scaling `kappa_i`.
    pub i_s: Option<f64>,
}

impl Default for RectennaParams {
    /// 2.45 GHz single-diode rectifier constants used in the evaluations.
    fn default() -> Self {
        Self {
            v_t: 25.86e-3,
            n_ideality: 1.05,
            r_ant: 50.0,
            r_load: 5000.0,
            n0: 4,
            i_s: None,
        }
    }
}

impl RectennaParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v_t", self.v_t),
            ("n_ideality", self.n_ideality),
            ("r_ant", self.r_ant),
            ("r_load", self.r_load),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(WptError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n0 < 2 || self.n0 % 2 != 0 || self.n0 > MAX_ORDER {
            return Err(WptError::Config(format!(
                "truncation order n0 must be one of 2, 4, 6, got {}",
                self.n0
            )));
        }
        if let Some(i_s) = self.i_s {
            if !(i_s > 0.0) || !i_s.is_finite() {
                return Err(WptError::Config(format!("i_s must be positive, got {i_s}")));
            }
        }
        Ok(())
    }
}

/// `zeta_i = (1/2pi) int_0^{2pi} sin^i t dt = (i-1)!! / i!!` for even `i`.
pub fn zeta(order: u32) -> Option<f64> {
    match order {
        2 => Some(0.5),
        4 => Some(0.375),
        6 => Some(0.3125),
        _ => None,
    }
}

/// Per-order Taylor coefficients, indexed by even order.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorCoefficients {
    n0: u32,
    beta: Vec<(u32, f64)>,
    zeta: Vec<(u32, f64)>,
    kappa: Vec<(u32, f64)>,
}

fn lookup(table: &[(u32, f64)], order: u32) -> Option<f64> {
    table.iter().find(|(i, _)| *i == order).map(|(_, v)| *v)
}

impl TaylorCoefficients {
    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn beta(&self, order: u32) -> Option<f64> {
        lookup(&self.beta, order)
    }

    pub fn zeta(&self, order: u32) -> Option<f64> {
        lookup(&self.zeta, order)
    }

    /// Current-model coefficient; `None` unless `i_s` was supplied.
    pub fn kappa(&self, order: u32) -> Option<f64> {
        lookup(&self.kappa, order)
    }

    pub fn has_kappa(&self) -> bool {
        !self.kappa.is_empty()
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.beta.iter().map(|(i, _)| *i)
    }

    /// `beta_i * zeta_i` pairs, the polynomial coefficients of `v_out(a)`.
    pub fn amplitude_poly(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.beta
            .iter()
            .zip(&self.zeta)
            .map(|(&(i, b), &(_, z))| (i, b * z))
    }

    /// Same coefficients with the truncation lowered to `n0` (used to compare
    /// truncation orders on one parameter set).
    pub fn truncated(&self, n0: u32) -> Result<Self> {
        if n0 < 2 || n0 % 2 != 0 || n0 > self.n0 {
            return Err(WptError::Config(format!(
                "cannot truncate order {} coefficients to {n0}",
                self.n0
            )));
        }
        let keep = |t: &Vec<(u32, f64)>| t.iter().copied().filter(|(i, _)| *i <= n0).collect();
        Ok(Self {
            n0,
            beta: keep(&self.beta),
            zeta: keep(&self.zeta),
            kappa: keep(&self.kappa),
        })
    }
}

/// `beta_i = r_ant^{i/2} / (i! (n v_t)^{i-1})`, `zeta_i`, and optionally
/// `kappa_i = (i_s / (n v_t)) beta_i`.
pub fn make_coefficients(params: &RectennaParams) -> Result<TaylorCoefficients> {
    params.validate()?;
    let nvt = params.n_ideality * params.v_t;
    let mut beta = Vec::new();
    let mut zeta_t = Vec::new();
    let mut kappa = Vec::new();
    for order in (2..=params.n0).step_by(2) {
        let factorial: f64 = (1..=order).map(f64::from).product();
        let b = params.r_ant.powf(f64::from(order) / 2.0) / (factorial * nvt.powi(order as i32 - 1));
        beta.push((order, b));
        zeta_t.push((order, zeta(order).expect("order bounded by MAX_ORDER")));
        if let Some(i_s) = params.i_s {
            kappa.push((order, i_s / nvt * b));
        }
    }
    Ok(TaylorCoefficients {
        n0: params.n0,
        beta,
        zeta: zeta_t,
        kappa,
    })
}

/// Output DC voltage of one rectifier driven at complex amplitude magnitude
/// `amplitude`.
pub fn vout_single(amplitude: f64, coeffs: &TaylorCoefficients) -> Result<f64> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(WptError::invalid(format!("amplitude must be >= 0, got {amplitude}")));
    }
    Ok(vout_from_power(amplitude * amplitude, coeffs))
}

/// `v_out` as a function of `r = |a|^2`.
pub(crate) fn vout_from_power(r: f64, coeffs: &TaylorCoefficients) -> f64 {
    coeffs
        .amplitude_poly()
        .map(|(i, c)| c * r.powi(i as i32 / 2))
        .sum()
}

fn check_transmit(h: &ComplexMatrix, w_t: &[C64]) -> Result<()> {
    if w_t.len() != h.cols() {
        return Err(WptError::invalid(format!(
            "transmit vector has {} entries but channel has {} columns",
            w_t.len(),
            h.cols()
        )));
    }
    Ok(())
}

/// Per-antenna `r_q = |h_q w_T|^2`.
pub fn per_antenna_gains(h: &ComplexMatrix, w_t: &[C64]) -> Result<Vec<f64>> {
    check_transmit(h, w_t)?;
    Ok(h.mul_vec(w_t).iter().map(|z| z.norm_sqr()).collect())
}

/// Total DC power with one rectifier per receive antenna:
/// `sum_q v_out(|h_q w_T|)^2 / R_L`.
pub fn pout_dc_combining(
    h: &ComplexMatrix,
    w_t: &[C64],
    coeffs: &TaylorCoefficients,
    r_load: f64,
) -> Result<f64> {
    let gains = per_antenna_gains(h, w_t)?;
    Ok(gains
        .iter()
        .map(|&r| vout_from_power(r, coeffs).powi(2))
        .sum::<f64>()
        / r_load)
}

/// DC power of a single rectifier fed by the combined signal `w_R^H H w_T`.
pub fn pout_rf_combining(
    h: &ComplexMatrix,
    w_t: &[C64],
    w_r: &[C64],
    coeffs: &TaylorCoefficients,
    r_load: f64,
) -> Result<f64> {
    check_transmit(h, w_t)?;
    if w_r.len() != h.rows() {
        return Err(WptError::invalid(format!(
            "receive vector has {} entries but channel has {} rows",
            w_r.len(),
            h.rows()
        )));
    }
    let gain = norm(w_r);
    if gain > 1.0 + 1e-9 {
        return Err(WptError::PassivityViolation { norm: gain });
    }
    let combined = inner(w_r, &h.mul_vec(w_t));
    Ok(vout_from_power(combined.norm_sqr(), coeffs).powi(2) / r_load)
}

/// One term `rho * r_antenna^exponent` of the DC-combining objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub antenna: usize,
    pub exponent: f64,
}

/// `P_out = sum_k rho_k prod_q r_q^{xi_qk}` with `r_q = |h_q w_T|^2`.
///
/// Squaring `sum_i beta_i zeta_i r^{i/2}` gives one monomial per distinct
/// exponent `(i + j) / 2` per antenna, so `n0 = 4` yields `3Q` terms with
/// exponents 2, 3, 4.
#[derive(Clone, Debug, PartialEq)]
pub struct PosynomialForm {
    antennas: usize,
    monomials: Vec<Monomial>,
}

impl PosynomialForm {
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `xi_qk`: exponent of `r_q` in monomial `k`.
    pub fn exponent(&self, antenna: usize, k: usize) -> f64 {
        let m = &self.monomials[k];
        if m.antenna == antenna {
            m.exponent
        } else {
            0.0
        }
    }

    /// `g_k(r)` for every monomial.
    pub fn terms(&self, r: &[f64]) -> Vec<f64> {
        self.monomials
            .iter()
            .map(|m| m.coeff * r[m.antenna].powf(m.exponent))
            .collect()
    }

    pub fn evaluate(&self, r: &[f64]) -> f64 {
        self.terms(r).iter().sum()
    }
}

/// Expands the DC-combining output power into monomials of the per-antenna
/// gains. Only the row count of `h` matters.
pub fn posynomial_form(h: &ComplexMatrix, coeffs: &TaylorCoefficients, r_load: f64) -> PosynomialForm {
    posynomial_for_antennas(h.rows(), coeffs, r_load)
}

pub(crate) fn posynomial_for_antennas(
    antennas: usize,
    coeffs: &TaylorCoefficients,
    r_load: f64,
) -> PosynomialForm {
    let poly: Vec<(u32, f64)> = coeffs.amplitude_poly().collect();
    // r^{i/2} * r^{j/2}, grouped by exponent.
    let mut by_exponent: Vec<(u32, f64)> = Vec::new();
    for &(i, ci) in &poly {
        for &(j, cj) in &poly {
            let e = i / 2 + j / 2;
            match by_exponent.iter_mut().find(|(x, _)| *x == e) {
                Some(slot) => slot.1 += ci * cj,
                None => by_exponent.push((e, ci * cj)),
            }
        }
    }
    by_exponent.sort_by_key(|(e, _)| *e);
    let monomials = (0..antennas)
        .flat_map(|q| {
            by_exponent.iter().map(move |&(e, c)| Monomial {
                coeff: c / r_load,
                antenna: q,
                exponent: f64::from(e),
            })
        })
        .collect();
    PosynomialForm {
        antennas,
        monomials,
    }
}
