//! How often the relaxed combiner problem is already rank one, and how close
//! the extracted phases come to the relaxed optimum.
//!
//! ```bash
//! cargo run --release --example sdr_tightness
//! ```

use mimo_wpt::harness::{run_experiment, ExperimentConfig, Scheme};

fn main() -> mimo_wpt::Result<()> {
    let cfg = ExperimentConfig {
        m_values: vec![1, 2, 4],
        q_values: vec![2, 4, 8],
        n_realizations: 40,
        schemes: vec![Scheme::RfAbf],
        ..ExperimentConfig::default()
    };
    let summary = run_experiment(&cfg)?;
    println!("{:>2} {:>2} {:>8} {:>8}", "M", "Q", "R1", "R2");
    for c in &summary.cells {
        println!(
            "{:>2} {:>2} {:>8.4} {:>8.4}",
            c.m,
            c.q,
            c.mean_r1.unwrap_or(f64::NAN),
            c.mean_r2.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
