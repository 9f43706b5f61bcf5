//! Draw a calibrated Rayleigh channel, check its average received power and
//! round-trip it through the CSV format read by `mimo-wpt optimize`.
//!
//! ```bash
//! cargo run --example channel_csv
//! ```

use mimo_wpt::channel::{channel_from_csv, channel_to_csv, generate_channel, transmit_power_watts, watts_to_dbm, ChannelConfig};

fn main() -> mimo_wpt::Result<()> {
    let cfg = ChannelConfig {
        m_tx: 1,
        q_rx: 1,
        path_loss_db: 66.0,
        transmit_power_dbm: 36.0,
        seed: 11,
    };
    let p = transmit_power_watts(&cfg);
    let n = 20_000;
    let avg: f64 = (0..n)
        .map(|i| p * generate_channel(&cfg, i)[(0, 0)].norm_sqr())
        .sum::<f64>()
        / n as f64;
    println!("P = {p:.3} W, average P|h|^2 = {:.2} dBm over {n} draws", watts_to_dbm(avg));

    let h = generate_channel(&ChannelConfig { m_tx: 3, q_rx: 2, ..cfg }, 0);
    let csv = channel_to_csv(&h);
    print!("{csv}");
    assert_eq!(channel_from_csv(&csv)?, h);
    Ok(())
}
