//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use mimo_wpt::channel::{generate_channel, transmit_power_watts, ChannelConfig};
use mimo_wpt::linalg::{ComplexMatrix, C64};
use mimo_wpt::rectenna::{make_coefficients, pout_dc_combining, pout_rf_combining, RectennaParams, TaylorCoefficients};

pub const R_LOAD: f64 = 5000.0;

pub fn coeffs() -> TaylorCoefficients {
    make_coefficients(&RectennaParams::default()).unwrap()
}

pub fn calibrated(m: usize, q: usize, seed: u64) -> ChannelConfig {
    ChannelConfig {
        m_tx: m,
        q_rx: q,
        path_loss_db: 66.0,
        transmit_power_dbm: 36.0,
        seed,
    }
}

/// `n` calibrated channels and the matching transmit power.
pub fn channels(m: usize, q: usize, seed: u64, n: u64) -> (f64, Vec<ComplexMatrix>) {
    let cfg = calibrated(m, q, seed);
    (transmit_power_watts(&cfg), (0..n).map(|i| generate_channel(&cfg, i)).collect())
}

/// Output power of MRT on a single receive antenna, written out from the
/// model: `(b2 z2 x + b4 z4 x^2)^2 / R_L` with `x = 2P ||h||^2`.
pub fn mrt_closed_form(h: &[C64], p: f64, c: &TaylorCoefficients, r_load: f64) -> f64 {
    let x = 2.0 * p * h.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let v = c.beta(2).unwrap() * 0.5 * x + c.beta(4).unwrap() * 0.375 * x * x;
    v * v / r_load
}

fn two_antenna_beam(p: f64, a: f64, phi: f64) -> Vec<C64> {
    let s = (2.0 * p).sqrt();
    vec![C64::new(s * a.cos(), 0.0), C64::from_polar(s * a.sin(), phi)]
}

/// Best DC-combining output over rank-one beamformers of a two-antenna
/// transmitter: a dense grid on (amplitude split, relative phase), then
/// three zoomed refinements around the incumbent.
pub fn dc_grid_oracle(h: &ComplexMatrix, p: f64, c: &TaylorCoefficients) -> f64 {
    assert_eq!(h.cols(), 2);
    let eval = |a: f64, phi: f64| pout_dc_combining(h, &two_antenna_beam(p, a, phi), c, R_LOAD).unwrap();
    let (mut best, mut ba, mut bphi) = (f64::MIN, 0.0, 0.0);
    let (na, nphi) = (200, 400);
    for i in 0..=na {
        let a = PI / 2.0 * i as f64 / na as f64;
        for j in 0..nphi {
            let phi = 2.0 * PI * j as f64 / nphi as f64;
            let v = eval(a, phi);
            if v > best {
                (best, ba, bphi) = (v, a, phi);
            }
        }
    }
    let (mut da, mut dphi) = (PI / 2.0 / na as f64, 2.0 * PI / nphi as f64);
    for _ in 0..3 {
        let (ca, cphi) = (ba, bphi);
        for i in -20..=20 {
            let a = (ca + da * i as f64 / 10.0).clamp(0.0, PI / 2.0);
            for j in -20..=20 {
                let phi = cphi + dphi * j as f64 / 10.0;
                let v = eval(a, phi);
                if v > best {
                    (best, ba, bphi) = (v, a, phi);
                }
            }
        }
        da /= 10.0;
        dphi /= 10.0;
    }
    best
}

/// Best analog combiner on two receive antennas over `n` values of the
/// second phase (the first is fixed at zero): returns `(||w_R^H H||^2,
/// P_out with MRT)` at the grid maximum.
pub fn analog_grid_oracle(h: &ComplexMatrix, p: f64, c: &TaylorCoefficients, n: usize) -> (f64, f64) {
    assert_eq!(h.rows(), 2);
    let mut best = (f64::MIN, vec![]);
    for k in 0..n {
        let theta = -PI + 2.0 * PI * k as f64 / n as f64;
        let w_r = vec![C64::new(0.5f64.sqrt(), 0.0), C64::from_polar(0.5f64.sqrt(), -theta)];
        let eff = h.adjoint().mul_vec(&w_r);
        let g: f64 = eff.iter().map(|z| z.norm_sqr()).sum();
        if g > best.0 {
            best = (g, w_r);
        }
    }
    let w_r = best.1;
    let eff = h.adjoint().mul_vec(&w_r);
    let norm = eff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let w_t: Vec<C64> = eff.iter().map(|z| z * ((2.0 * p).sqrt() / norm)).collect();
    (best.0, pout_rf_combining(h, &w_t, &w_r, c, R_LOAD).unwrap())
}
