//! I.i.d. Rayleigh MIMO channels.
//!
//! Realization `k` of a configuration is drawn from the ChaCha8 stream
//! `(seed, k)`, entries in row-major order, each entry via one Box-Muller
//! pair. The same `(seed, k)` always gives the same matrix bit for bit, and
//! realizations can be generated in any order.

use std::fmt::Write as _;

use crate::error::{Result, WptError};
use crate::linalg::{ComplexMatrix, C64};
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    /// Transmit antennas `M`.
    pub m_tx: usize,
    /// Receive antennas `Q`.
    pub q_rx: usize,
    pub path_loss_db: f64,
    pub transmit_power_dbm: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_tx == 0 || self.q_rx == 0 {
            return Err(WptError::Config("antenna counts must be at least 1".into()));
        }
        if !self.path_loss_db.is_finite() || !self.transmit_power_dbm.is_finite() {
            return Err(WptError::Config("path loss and power must be finite".into()));
        }
        Ok(())
    }

    /// Per-entry variance `10^(-PL/10)`.
    pub fn entry_variance(&self) -> f64 {
        10f64.powf(-self.path_loss_db / 10.0)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn transmit_power_watts(cfg: &ChannelConfig) -> f64 {
    dbm_to_watts(cfg.transmit_power_dbm)
}

/// `Q x M` channel for one realization.
pub fn generate_channel(cfg: &ChannelConfig, realization_index: u64) -> ComplexMatrix {
    let variance = cfg.entry_variance();
    let mut stream = rng::stream(cfg.seed, realization_index);
    ComplexMatrix::from_fn(cfg.q_rx, cfg.m_tx, |_, _| rng::cscg(&mut stream, variance))
}

/// CSV with one line per receive antenna and interleaved `re,im` columns.
pub fn channel_to_csv(h: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..h.rows() {
        let fields: Vec<String> = h
            .row(i)
            .iter()
            .flat_map(|z| [format!("{:e}", z.re), format!("{:e}", z.im)])
            .collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

/// Parses [`channel_to_csv`] output. Blank lines and `#` comments are
/// skipped; every data line must carry the same even number of fields.
pub fn channel_from_csv(text: &str) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut values = Vec::new();
        let mut column = 1;
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| WptError::Parse {
                line: line_no,
                column,
                message: format!("not a number: {:?}", field.trim()),
            })?;
            if !v.is_finite() {
                return Err(WptError::Parse {
                    line: line_no,
                    column,
                    message: "non-finite value".into(),
                });
            }
            values.push(v);
            column += field.len() + 1;
        }
        if values.len() % 2 != 0 {
            return Err(WptError::Parse {
                line: line_no,
                column: line.len(),
                message: format!("odd number of fields ({}), expected re,im pairs", values.len()),
            });
        }
        let row: Vec<C64> = values.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(WptError::Parse {
                    line: line_no,
                    column: 1,
                    message: format!(
                        "row has {} complex entries, expected {}",
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(WptError::Parse {
            line: 1,
            column: 1,
            message: "empty channel file".into(),
        });
    }
    ComplexMatrix::from_rows(&rows)
}
