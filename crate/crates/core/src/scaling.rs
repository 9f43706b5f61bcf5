//! Average output power versus antenna count for i.i.d. unit-variance
//! Rayleigh channels and a 1 ohm load.
//!
//! The closed forms follow from the moments of `||h||^2` (a scaled chi-square
//! variable) and, for the analog combiner, from counting the distinct-index
//! products in `||h||_1^{2n}`. The Monte Carlo estimators evaluate the same
//! quantities by sampling so the two can be compared.

use std::f64::consts::PI;

use crate::error::{Result, WptError};
use crate::linalg::{norm, norm1};
use crate::rectenna::TaylorCoefficients;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingInputs {
    /// `M` for the MISO laws, `Q` for the SIMO laws.
    pub antennas: u32,
    pub power: f64,
    pub beta2: f64,
    pub beta4: f64,
    /// 2 drops every `beta4` term, 4 keeps them.
    pub truncation: u32,
}

impl ScalingInputs {
    pub fn from_coefficients(antennas: u32, power: f64, coeffs: &TaylorCoefficients, truncation: u32) -> Result<Self> {
        let inputs = Self {
            antennas,
            power,
            beta2: coeffs.beta(2).unwrap_or(0.0),
            beta4: coeffs.beta(4).unwrap_or(0.0),
            truncation,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.antennas == 0 {
            return Err(WptError::invalid("antenna count must be at least 1"));
        }
        if !(self.power >= 0.0) || !self.power.is_finite() {
            return Err(WptError::invalid("power must be finite and non-negative"));
        }
        if self.truncation != 2 && self.truncation != 4 {
            return Err(WptError::Config(format!(
                "truncation order {} not supported, use 2 or 4",
                self.truncation
            )));
        }
        Ok(())
    }

    fn beta4_eff(&self) -> f64 {
        if self.truncation == 2 {
            0.0
        } else {
            self.beta4
        }
    }

    /// DC power from a single rectifier seeing `x = |effective gain|^2` at
    /// transmit power `P`: `(beta2 P x + 3/2 beta4 P^2 x^2)^2`.
    pub fn pout_at_gain(&self, x: f64) -> f64 {
        let p = self.power;
        let v = self.beta2 * p * x + 1.5 * self.beta4_eff() * p * p * x * x;
        v * v
    }

    /// `a E{x^2} + b E{x^3} + c E{x^4}` for the three moment weights of
    /// [`ScalingInputs::pout_at_gain`].
    fn combine(&self, m2: f64, m3: f64, m4: f64) -> f64 {
        let p = self.power;
        let (b2, b4) = (self.beta2, self.beta4_eff());
        b2 * b2 * p * p * m2 + 3.0 * b2 * b4 * p.powi(3) * m3 + 2.25 * b4 * b4 * p.powi(4) * m4
    }
}

/// `E{||h||^{2n}} = (M+n-1)!/(M-1)!` for `M` unit-variance CSCG entries.
pub fn chi2_moment(m: u32, n: u32) -> f64 {
    assert!(m >= 1, "chi2_moment needs at least one entry");
    (0..n).map(|k| f64::from(m + k)).product()
}

/// `Q (Q-1) ... (Q-n+1)`, zero when `Q < n`.
pub fn falling_factorial(q: u32, n: u32) -> f64 {
    if q < n {
        return 0.0;
    }
    (0..n).map(|k| f64::from(q - k)).product()
}

/// MRT over `M` transmit antennas to one receive antenna.
pub fn miso_mrt_average(inputs: &ScalingInputs) -> f64 {
    let m = inputs.antennas;
    inputs.combine(chi2_moment(m, 2), chi2_moment(m, 3), chi2_moment(m, 4))
}

/// One transmit antenna, `Q` rectifiers with DC combining. Linear in `Q`.
pub fn simo_dc_average(inputs: &ScalingInputs) -> f64 {
    f64::from(inputs.antennas) * inputs.combine(2.0, 6.0, 24.0)
}

/// One transmit antenna, MRC into a single rectifier.
pub fn simo_rf_mrc_average(inputs: &ScalingInputs) -> f64 {
    miso_mrt_average(inputs)
}

/// Lower bound on the analog-combiner average, keeping only the products of
/// distinct `|h_q|` in `||h||_1^{2n}`.
pub fn simo_rf_analog_lower_bound(inputs: &ScalingInputs) -> f64 {
    let q = inputs.antennas;
    let qf = f64::from(q);
    // Gamma(1.5) = E{|h_q|} for unit variance.
    let g = PI.sqrt() / 2.0;
    let m2 = g.powi(4) * falling_factorial(q, 4) / qf.powi(2);
    let m3 = g.powi(6) * falling_factorial(q, 6) / qf.powi(3);
    let m4 = g.powi(8) * falling_factorial(q, 8) / qf.powi(4);
    inputs.combine(m2, m3, m4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalingScheme {
    MisoMrt,
    SimoDc,
    SimoRfMrc,
    SimoRfAnalog,
}

impl ScalingScheme {
    pub const ALL: [ScalingScheme; 4] = [
        ScalingScheme::MisoMrt,
        ScalingScheme::SimoDc,
        ScalingScheme::SimoRfMrc,
        ScalingScheme::SimoRfAnalog,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScalingScheme::MisoMrt => "miso_mrt",
            ScalingScheme::SimoDc => "simo_dc",
            ScalingScheme::SimoRfMrc => "simo_rf_mrc",
            ScalingScheme::SimoRfAnalog => "simo_rf_analog",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| WptError::Config(format!("unknown scaling scheme `{s}`")))
    }

    /// Closed form; for the analog combiner this is the lower bound.
    pub fn analytic(self, inputs: &ScalingInputs) -> f64 {
        match self {
            ScalingScheme::MisoMrt => miso_mrt_average(inputs),
            ScalingScheme::SimoDc => simo_dc_average(inputs),
            ScalingScheme::SimoRfMrc => simo_rf_mrc_average(inputs),
            ScalingScheme::SimoRfAnalog => simo_rf_analog_lower_bound(inputs),
        }
    }

    fn id(self) -> u64 {
        self as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Sample mean of the scheme's output power over `samples` unit-variance
/// channel draws. Sample `i` uses stream `i` of a seed derived from
/// `(seed, scheme, antennas)`, so results do not depend on evaluation order.
pub fn montecarlo_average(
    scheme: ScalingScheme,
    inputs: &ScalingInputs,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    inputs.validate()?;
    if samples == 0 {
        return Err(WptError::invalid("at least one sample required"));
    }
    let base = rng::derive_seed(&[seed, scheme.id(), u64::from(inputs.antennas)]);
    let n = inputs.antennas as usize;
    let values: Vec<f64> = (0..samples as u64)
        .map(|i| {
            let mut stream = rng::stream(base, i);
            let h = rng::cscg_vector(&mut stream, n);
            let gain = match scheme {
                // MRT and MRC both see ||h||^2.
                ScalingScheme::MisoMrt | ScalingScheme::SimoRfMrc => norm(&h).powi(2),
                ScalingScheme::SimoRfAnalog => norm1(&h).powi(2) / n as f64,
                ScalingScheme::SimoDc => {
                    return h.iter().map(|z| inputs.pout_at_gain(z.norm_sqr())).sum();
                }
            };
            inputs.pout_at_gain(gain)
        })
        .collect();
    Ok(summarize(&values))
}

/// Mean and standard error, summed in index order.
pub fn summarize(values: &[f64]) -> McEstimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_err = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    McEstimate { mean, std_err, samples: n }
}
