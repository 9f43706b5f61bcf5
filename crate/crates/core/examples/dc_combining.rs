//! Optimized transmit beamforming for DC combining against the SVD
//! beamformer, with the objective trace of the successive approximation.
//!
//! ```bash
//! cargo run --release --example dc_combining
//! ```

use mimo_wpt::channel::{generate_channel, transmit_power_watts, watts_to_dbm, ChannelConfig};
use mimo_wpt::dc_combining::{optimize_dc, svd_transmit_baseline, DcOptConfig};
use mimo_wpt::harness::received_rf_power;
use mimo_wpt::rectenna::{make_coefficients, pout_dc_combining, RectennaParams};

fn main() -> mimo_wpt::Result<()> {
    let params = RectennaParams::default();
    let coeffs = make_coefficients(&params)?;
    let cfg = ChannelConfig {
        m_tx: 4,
        q_rx: 4,
        path_loss_db: 66.0,
        transmit_power_dbm: 36.0,
        seed: 3,
    };
    let p = transmit_power_watts(&cfg);
    let h = generate_channel(&cfg, 0);

    let svd = svd_transmit_baseline(&h, p)?;
    let res = optimize_dc(&h, p, &coeffs, params.r_load, &DcOptConfig::default())?;

    for (i, v) in res.objective_trace.iter().enumerate() {
        println!("iteration {i:>2}: {:.4} dBm", watts_to_dbm(*v));
    }
    println!("rank one: {} (R1 = {:.6})", res.rank1, res.r1_ratio);
    println!(
        "SVD: P_out {:.3} dBm, P_rf {:.3} dBm",
        watts_to_dbm(pout_dc_combining(&h, &svd, &coeffs, params.r_load)?),
        watts_to_dbm(received_rf_power(&h, &svd, None)?)
    );
    println!(
        "OPT: P_out {:.3} dBm, P_rf {:.3} dBm",
        watts_to_dbm(res.p_out),
        watts_to_dbm(received_rf_power(&h, &res.w_t, None)?)
    );
    Ok(())
}
