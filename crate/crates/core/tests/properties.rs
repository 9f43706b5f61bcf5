//! Randomized invariants over seeds and sizes.

mod common;

use common::*;
use mimo_wpt::channel::{channel_from_csv, channel_to_csv, generate_channel};
use mimo_wpt::convex::solve_diag_constrained_sdp;
use mimo_wpt::dc_combining::{optimize_dc, svd_transmit_baseline, update_gamma, DcOptConfig};
use mimo_wpt::linalg::{evd_hermitian, norm, quad_form, svd, ComplexMatrix, C64};
use mimo_wpt::rectenna::{posynomial_form, pout_dc_combining, pout_rf_combining, vout_single};
use mimo_wpt::rf_combining::{mrc, mrt_against_combiner, optimize_rf_analog, optimize_rf_svd, AnalogConfig};
use mimo_wpt::rng;
use mimo_wpt::scaling::{
    falling_factorial, miso_mrt_average, simo_dc_average, simo_rf_mrc_average, ScalingInputs,
};
use proptest::prelude::*;

fn random_matrix(rows: usize, cols: usize, seed: u64, variance: f64) -> ComplexMatrix {
    let mut s = rng::stream(seed, 7);
    ComplexMatrix::from_fn(rows, cols, |_, _| rng::cscg(&mut s, variance))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn scaling_inputs(antennas: u32, power: f64) -> ScalingInputs {
    ScalingInputs::from_coefficients(antennas, power, &coeffs(), 4).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstruction_residual(rows in 1usize..9, cols in 1usize..9, seed in any::<u64>()) {
        let a = random_matrix(rows, cols, seed, 1.0);
        let s = svd(&a).unwrap();
        prop_assert!(s.reconstruct().sub(&a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn gram_spectrum_is_squared_singular_values(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
        let a = random_matrix(rows, cols, seed, 1.0);
        let eig = evd_hermitian(&a.adjoint().matmul(&a)).unwrap();
        let s = svd(&a).unwrap();
        let top = s.singular_values[0].powi(2);
        for (k, l) in eig.values.iter().enumerate() {
            let sv = s.singular_values.get(k).copied().unwrap_or(0.0);
            prop_assert!((l - sv * sv).abs() <= 1e-8 * top.max(1e-300));
        }
    }

    #[test]
    fn vout_strictly_increasing(a in 0.0f64..0.5, step in 1e-6f64..0.1) {
        let c = coeffs();
        prop_assert!(vout_single(a + step, &c).unwrap() > vout_single(a, &c).unwrap());
    }

    #[test]
    fn concentrating_power_beats_equal_split(total in 1e-8f64..1e-2, q in 2usize..9) {
        // Two channels that deliver the same total r: all on antenna 0, or spread evenly.
        let c = coeffs();
        let w = vec![C64::new(1.0, 0.0)];
        let concentrated = ComplexMatrix::from_fn(q, 1, |i, _| C64::new(if i == 0 { total.sqrt() } else { 0.0 }, 0.0));
        let split = ComplexMatrix::from_fn(q, 1, |_, _| C64::new((total / q as f64).sqrt(), 0.0));
        let a = pout_dc_combining(&concentrated, &w, &c, R_LOAD).unwrap();
        let b = pout_dc_combining(&split, &w, &c, R_LOAD).unwrap();
        prop_assert!(a >= b);
    }

    #[test]
    fn single_receiver_dc_equals_rf(m in 1usize..5, seed in any::<u64>(), theta in -3.2f64..3.2) {
        let c = coeffs();
        let h = random_matrix(1, m, seed, 1e-6);
        let w_t = svd_transmit_baseline(&h, 4.0).unwrap();
        let dc = pout_dc_combining(&h, &w_t, &c, R_LOAD).unwrap();
        let rf = pout_rf_combining(&h, &w_t, &[C64::from_polar(1.0, theta)], &c, R_LOAD).unwrap();
        prop_assert!(rel_close(dc, rf, 1e-12));
    }

    #[test]
    fn posynomial_equals_direct_objective(q in 1usize..7, m in 1usize..5, seed in any::<u64>()) {
        let c = coeffs();
        let h = random_matrix(q, m, seed, 1e-6);
        let mut s = rng::stream(seed, 8);
        let w_t = rng::cscg_vector(&mut s, m);
        let r: Vec<f64> = h.mul_vec(&w_t).iter().map(|z| z.norm_sqr()).collect();
        let form = posynomial_form(&ComplexMatrix::identity(q), &c, R_LOAD);
        let direct = pout_dc_combining(&h, &w_t, &c, R_LOAD).unwrap();
        prop_assert!(rel_close(form.evaluate(&r), direct, 1e-12));
    }

    #[test]
    fn gamma_on_simplex_and_tight(q in 1usize..6, seed in any::<u64>()) {
        let c = coeffs();
        let form = posynomial_form(&ComplexMatrix::identity(q), &c, R_LOAD);
        let mut s = rng::stream(seed, 9);
        let r: Vec<f64> = rng::cscg_vector(&mut s, q).iter().map(|z| z.norm_sqr() * 1e-4 + 1e-9).collect();
        let gamma = update_gamma(&r, &form).unwrap();
        prop_assert!(gamma.iter().all(|&g| g >= 0.0));
        prop_assert!((gamma.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // AM-GM: prod (g_k / gamma_k)^gamma_k equals the posynomial at the expansion point.
        let log_bound: f64 = form.terms(&r).iter().zip(&gamma)
            .filter(|(_, &g)| g > 0.0)
            .map(|(t, g)| g * (t / g).ln())
            .sum();
        prop_assert!(rel_close(log_bound.exp(), form.evaluate(&r), 1e-10));
    }

    #[test]
    fn mrt_meets_cauchy_schwarz(m in 1usize..6, seed in any::<u64>()) {
        let h = random_matrix(1, m, seed, 1.0);
        let w_r = [C64::new(1.0, 0.0)];
        let w_t = mrt_against_combiner(&h, &w_r, 0.5).unwrap();
        prop_assert!(rel_close(norm(&w_t), 1.0, 1e-12));
        let gain = h.mul_vec(&w_t)[0].norm_sqr();
        prop_assert!(rel_close(gain, h.frobenius_norm().powi(2), 1e-12));
        let mut s = rng::stream(seed, 10);
        let v = rng::cscg_vector(&mut s, m);
        let v: Vec<C64> = v.iter().map(|z| z / norm(&v)).collect();
        prop_assert!(h.mul_vec(&v)[0].norm_sqr() <= gain * (1.0 + 1e-12));
    }

    #[test]
    fn combiners_are_passive(q in 1usize..9, seed in any::<u64>()) {
        let h = random_matrix(q, 2, seed, 1.0);
        prop_assert!(rel_close(norm(&mrc(&h.column(0)).unwrap()), 1.0, 1e-12));
        let res = optimize_rf_analog(&h, 1.0, &coeffs(), R_LOAD, &AnalogConfig::default()).unwrap();
        prop_assert!(rel_close(norm(&res.w_r), 1.0, 1e-12));
        prop_assert!(res.w_r.iter().all(|z| rel_close(z.norm(), 1.0 / (q as f64).sqrt(), 1e-12)));
        prop_assert_eq!(res.combiner.unwrap().phases()[0], 0.0);
    }

    #[test]
    fn scaling_symmetry_and_ordering(k in 1u32..33, power in 1e-6f64..1.0) {
        let x = scaling_inputs(k, power);
        prop_assert_eq!(simo_rf_mrc_average(&x), miso_mrt_average(&x));
        if k >= 2 {
            prop_assert!(simo_rf_mrc_average(&x) > simo_dc_average(&x));
        }
        let one = simo_dc_average(&scaling_inputs(1, power));
        prop_assert!(rel_close(simo_dc_average(&x), f64::from(k) * one, 1e-12));
    }

    #[test]
    fn falling_factorial_vanishes_below_order(q in 0u32..8, extra in 1u32..5) {
        prop_assert_eq!(falling_factorial(q, q + extra), 0.0);
        prop_assert!(falling_factorial(q + extra, q + extra) > 0.0);
    }

    #[test]
    fn channel_generation_is_deterministic(m in 1usize..5, q in 1usize..5, seed in any::<u64>(), index in any::<u64>()) {
        let cfg = calibrated(m, q, seed);
        let a = generate_channel(&cfg, index);
        prop_assert_eq!(&a, &generate_channel(&cfg, index));
        let back = channel_from_csv(&channel_to_csv(&a)).unwrap();
        prop_assert_eq!(&a, &back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dc_opt_feasible_monotone_and_above_svd(m in 1usize..4, q in 1usize..5, seed in any::<u64>()) {
        let c = coeffs();
        let (p, hs) = channels(m, q, seed, 1);
        let h = &hs[0];
        let cfg = DcOptConfig { randomization_seed: seed, ..DcOptConfig::default() };
        let res = optimize_dc(h, p, &c, R_LOAD, &cfg).unwrap();
        prop_assert!(norm(&res.w_t).powi(2) <= 2.0 * p * (1.0 + 1e-9));
        let base = pout_dc_combining(h, &svd_transmit_baseline(h, p).unwrap(), &c, R_LOAD).unwrap();
        prop_assert!(res.p_out >= base - 1e-9);
        for w in res.objective_trace.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-8));
        }
        let again = optimize_dc(h, p, &c, R_LOAD, &cfg).unwrap();
        prop_assert_eq!(res.w_t, again.w_t);
    }

    #[test]
    fn analog_bounded_by_svd_and_relaxation(m in 1usize..4, q in 1usize..7, seed in any::<u64>()) {
        let c = coeffs();
        let (p, hs) = channels(m, q, seed, 1);
        let h = &hs[0];
        let analog = optimize_rf_analog(h, p, &c, R_LOAD, &AnalogConfig { seed, ..AnalogConfig::default() }).unwrap();
        let best = optimize_rf_svd(h, p, &c, R_LOAD).unwrap();
        prop_assert!(analog.p_out <= best.p_out + 1e-9);
        let r2 = analog.r2_ratio.unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&r2));
        prop_assert!(r2 >= std::f64::consts::FRAC_PI_4 - 1e-9);
    }

    #[test]
    fn sdp_bounds_every_unit_modulus_vector(q in 2usize..6, seed in any::<u64>()) {
        let a = random_matrix(q, 3, seed, 1.0);
        let mut g = a.matmul(&a.adjoint());
        g.hermitianize();
        let sol = solve_diag_constrained_sdp(&g, q, 1e-10).unwrap();
        let diag_ok = (0..q).all(|i| (sol.matrix[(i, i)].re - 1.0 / q as f64).abs() <= 1e-8);
        prop_assert!(diag_ok);
        let mut s = rng::stream(seed, 11);
        for _ in 0..50 {
            let w: Vec<C64> = rng::cscg_vector(&mut s, q).iter()
                .map(|z| C64::from_polar(1.0 / (q as f64).sqrt(), z.arg()))
                .collect();
            prop_assert!(quad_form(&g, &w) <= sol.objective * (1.0 + 1e-9));
        }
    }
}
