//! Jointly optimal transmit and receive beamformers for RF combining, and
//! MRT towards a fixed combiner.
//!
//! ```bash
//! cargo run --example rf_combining_svd
//! ```

use mimo_wpt::channel::{generate_channel, transmit_power_watts, watts_to_dbm, ChannelConfig};
use mimo_wpt::linalg::svd;
use mimo_wpt::rectenna::{make_coefficients, pout_rf_combining, RectennaParams};
use mimo_wpt::rf_combining::{combined_gain, mrc, mrt_against_combiner, optimize_rf_svd};

fn main() -> mimo_wpt::Result<()> {
    let params = RectennaParams::default();
    let coeffs = make_coefficients(&params)?;
    let cfg = ChannelConfig {
        m_tx: 2,
        q_rx: 4,
        path_loss_db: 66.0,
        transmit_power_dbm: 36.0,
        seed: 5,
    };
    let p = transmit_power_watts(&cfg);
    let h = generate_channel(&cfg, 0);

    let best = optimize_rf_svd(&h, p, &coeffs, params.r_load)?;
    let sigma1 = svd(&h)?.singular_values[0];
    println!("|w_R^H H w_T|^2 = {:.6e}, 2P sigma1^2 = {:.6e}", combined_gain(&h, &best.w_t, &best.w_r), 2.0 * p * sigma1 * sigma1);
    println!("SVD pair: {:.3} dBm", watts_to_dbm(best.p_out));

    // MRC on the first transmit column, then MRT against that combiner.
    let w_r = mrc(&h.column(0))?;
    let w_t = mrt_against_combiner(&h, &w_r, p)?;
    let p_out = pout_rf_combining(&h, &w_t, &w_r, &coeffs, params.r_load)?;
    println!("MRC on column 0 + MRT: {:.3} dBm", watts_to_dbm(p_out));
    Ok(())
}
