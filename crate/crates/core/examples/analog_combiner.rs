//! Phase-shifter receive combining: semidefinite relaxation, rank-one check
//! and the resulting phases.
//!
//! ```bash
//! cargo run --release --example analog_combiner
//! ```

use mimo_wpt::channel::{generate_channel, transmit_power_watts, watts_to_dbm, ChannelConfig};
use mimo_wpt::rectenna::{make_coefficients, RectennaParams};
use mimo_wpt::rf_combining::{optimize_rf_analog, optimize_rf_svd, AnalogConfig};

fn main() -> mimo_wpt::Result<()> {
    let params = RectennaParams::default();
    let coeffs = make_coefficients(&params)?;
    for (m, q) in [(1, 4), (2, 4), (4, 8)] {
        let cfg = ChannelConfig {
            m_tx: m,
            q_rx: q,
            path_loss_db: 66.0,
            transmit_power_dbm: 36.0,
            seed: 9,
        };
        let p = transmit_power_watts(&cfg);
        let h = generate_channel(&cfg, 0);
        let abf = optimize_rf_analog(&h, p, &coeffs, params.r_load, &AnalogConfig::default())?;
        let svd = optimize_rf_svd(&h, p, &coeffs, params.r_load)?;
        let phases: Vec<String> = abf
            .combiner
            .as_ref()
            .map(|c| c.phases().iter().map(|t| format!("{t:+.3}")).collect())
            .unwrap_or_default();
        println!(
            "M={m} Q={q}: R1={:.5} R2={:.5} analog {:.3} dBm, svd {:.3} dBm, theta [{}]",
            abf.r1_ratio.unwrap_or(f64::NAN),
            abf.r2_ratio.unwrap_or(f64::NAN),
            watts_to_dbm(abf.p_out),
            watts_to_dbm(svd.p_out),
            phases.join(", ")
        );
    }
    Ok(())
}
