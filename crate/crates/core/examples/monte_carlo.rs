//! A small seeded sweep over all four schemes, printed as CSV.
//!
//! ```bash
//! cargo run --release --example monte_carlo
//! ```

use mimo_wpt::harness::{run_experiment, summary_to_csv, ExperimentConfig};

fn main() -> mimo_wpt::Result<()> {
    let cfg = ExperimentConfig {
        m_values: vec![1, 2],
        q_values: vec![2, 4],
        n_realizations: 50,
        ..ExperimentConfig::default()
    };
    let summary = run_experiment(&cfg)?;
    print!("{}", summary_to_csv(&summary));
    Ok(())
}
