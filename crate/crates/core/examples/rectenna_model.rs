//! Output DC power of a single rectenna versus input RF power, for second-
//! and fourth-order truncations of the diode model.
//!
//! ```bash
//! cargo run --example rectenna_model
//! ```

use mimo_wpt::channel::watts_to_dbm;
use mimo_wpt::rectenna::{make_coefficients, vout_single, RectennaParams};

fn main() -> mimo_wpt::Result<()> {
    let params = RectennaParams::default();
    let fourth = make_coefficients(&params)?;
    let second = fourth.truncated(2)?;
    println!("beta2 = {:.4e}, beta4 = {:.4e}", fourth.beta(2).unwrap(), fourth.beta(4).unwrap());

    println!("{:>10} {:>14} {:>14}", "P_rf dBm", "P_out n0=2", "P_out n0=4");
    for dbm in (-40..=-10).step_by(5) {
        let p_rf = 10f64.powf((f64::from(dbm) - 30.0) / 10.0);
        // Received RF power is a^2 / 2.
        let a = (2.0 * p_rf).sqrt();
        let p2 = vout_single(a, &second)?.powi(2) / params.r_load;
        let p4 = vout_single(a, &fourth)?.powi(2) / params.r_load;
        println!("{dbm:>10} {:>14.2} {:>14.2}", watts_to_dbm(p2), watts_to_dbm(p4));
    }
    Ok(())
}
