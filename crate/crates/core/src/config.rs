//! Plain-text run configuration.
//!
//! One `key = value` pair per line, `#` starts a comment, lists are comma
//! separated. Unknown keys are rejected.
//!
//! ```text
//! # sweep
//! m_values = 1, 2, 4
//! q_values = 2, 4, 8
//! n_realizations = 500
//! seed = 2024
//! ```

use std::path::Path;

use crate::error::{Result, WptError};
use crate::harness::{ExperimentConfig, Scheme};

/// Settings of the scaling-law comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub samples: usize,
    /// Transmit antenna counts for the MISO law.
    pub m_values: Vec<u32>,
    /// Receive antenna counts for the SIMO laws.
    pub q_values: Vec<u32>,
    pub analog_q_values: Vec<u32>,
    pub analog_samples: usize,
    /// Transmit power in watts for unit-variance channels.
    pub power_w: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            m_values: vec![1, 2, 4],
            q_values: vec![1, 2, 4, 8],
            analog_q_values: vec![8, 12, 16, 24, 32],
            analog_samples: 10_000,
            power_w: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub scaling: ScalingConfig,
}

pub const KEYS: &[&str] = &[
    "m_values",
    "q_values",
    "n_realizations",
    "seed",
    "path_loss_db",
    "transmit_power_dbm",
    "v_t",
    "n_ideality",
    "r_ant",
    "r_load",
    "n0",
    "i_s",
    "epsilon",
    "i_max",
    "l_randomizations",
    "schemes",
    "scaling_samples",
    "scaling_m_values",
    "scaling_q_values",
    "analog_q_values",
    "analog_samples",
    "scaling_power_w",
];

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| format!("`{key}`: cannot parse `{}`: {e}", value.trim()))
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let items: std::result::Result<Vec<T>, String> = value
        .split(',')
        .map(|s| scalar(key, s))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(format!("`{key}` needs at least one value"));
    }
    Ok(items)
}

impl RunConfig {
    /// Sets one key; `value` is the raw text after `=`.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let e = &mut self.experiment;
        let s = &mut self.scaling;
        match key {
            "m_values" => e.m_values = list(key, value)?,
            "q_values" => e.q_values = list(key, value)?,
            "n_realizations" => e.n_realizations = scalar(key, value)?,
            "seed" => e.master_seed = scalar(key, value)?,
            "path_loss_db" => e.path_loss_db = scalar(key, value)?,
            "transmit_power_dbm" => e.transmit_power_dbm = scalar(key, value)?,
            "v_t" => e.rectenna.v_t = scalar(key, value)?,
            "n_ideality" => e.rectenna.n_ideality = scalar(key, value)?,
            "r_ant" => e.rectenna.r_ant = scalar(key, value)?,
            "r_load" => e.rectenna.r_load = scalar(key, value)?,
            "n0" => e.rectenna.n0 = scalar(key, value)?,
            "i_s" => {
                e.rectenna.i_s = match value.trim() {
                    "" | "none" => None,
                    v => Some(scalar(key, v)?),
                }
            }
            "epsilon" => e.dc_opt.epsilon = scalar(key, value)?,
            "i_max" => e.dc_opt.i_max = scalar(key, value)?,
            "l_randomizations" => {
                let l = scalar(key, value)?;
                e.dc_opt.l_randomizations = l;
                e.analog.l_randomizations = l;
            }
            "schemes" => {
                e.schemes = value
                    .split(',')
                    .map(|v| Scheme::parse(v.trim()).map_err(|err| err.to_string()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "scaling_samples" => s.samples = scalar(key, value)?,
            "scaling_m_values" => s.m_values = list(key, value)?,
            "scaling_q_values" => s.q_values = list(key, value)?,
            "analog_q_values" => s.analog_q_values = list(key, value)?,
            "analog_samples" => s.analog_samples = scalar(key, value)?,
            "scaling_power_w" => s.power_w = scalar(key, value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let err = |column: usize, message: String| WptError::Parse { line: i + 1, column, message };
            let Some(eq) = line.find('=') else {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(err(col, "expected `key = value`".into()));
            };
            let key = line[..eq].trim();
            let value = &line[eq + 1..];
            if key.is_empty() {
                return Err(err(eq + 1, "missing key before `=`".into()));
            }
            let key_col = line.len() - line.trim_start().len() + 1;
            cfg.set(key, value).map_err(|m| {
                let column = if KEYS.contains(&key) {
                    eq + 2 + (value.len() - value.trim_start().len())
                } else {
                    key_col
                };
                err(column, m)
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| WptError::Config(format!("override `{assignment}` is not key=value")))?;
        self.set(key.trim(), value).map_err(WptError::Config)
    }

    pub fn validate(&self) -> Result<()> {
        self.experiment.validate()?;
        let s = &self.scaling;
        if s.samples == 0 || s.analog_samples == 0 {
            return Err(WptError::Config("scaling sample counts must be at least 1".into()));
        }
        if s.m_values.iter().chain(&s.q_values).chain(&s.analog_q_values).any(|&v| v == 0) {
            return Err(WptError::Config("antenna counts must be at least 1".into()));
        }
        if !(s.power_w >= 0.0) || !s.power_w.is_finite() {
            return Err(WptError::Config("scaling_power_w must be non-negative".into()));
        }
        Ok(())
    }
}
