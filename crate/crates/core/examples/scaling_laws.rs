//! Average output power against the number of antennas: closed forms next
//! to Monte Carlo estimates.
//!
//! ```bash
//! cargo run --release --example scaling_laws
//! ```

use mimo_wpt::rectenna::{make_coefficients, RectennaParams};
use mimo_wpt::scaling::{montecarlo_average, ScalingInputs, ScalingScheme};

fn main() -> mimo_wpt::Result<()> {
    let coeffs = make_coefficients(&RectennaParams::default())?;
    let samples = 20_000;
    println!("{:<16} {:>3} {:>12} {:>12} {:>8}", "scheme", "N", "analytic", "monte carlo", "ratio");
    for scheme in ScalingScheme::ALL {
        let counts: &[u32] = if scheme == ScalingScheme::SimoRfAnalog { &[8, 16, 32] } else { &[1, 2, 4, 8] };
        for &n in counts {
            let inputs = ScalingInputs::from_coefficients(n, 1.0, &coeffs, 4)?;
            let analytic = scheme.analytic(&inputs);
            let mc = montecarlo_average(scheme, &inputs, samples, 1)?;
            println!(
                "{:<16} {n:>3} {analytic:>12.4e} {:>12.4e} {:>8.4}",
                scheme.name(),
                mc.mean,
                analytic / mc.mean
            );
        }
    }
    Ok(())
}
