//! Seeded Monte Carlo sweeps over `(M, Q)` grids.
//!
//! Every realization draws its channel from a seed derived from
//! `(master seed, M, Q)` and the realization index, runs each requested
//! scheme, and records the output DC power, received RF power and the
//! relaxation ratios. Realizations run in parallel; results are gathered in
//! index order so the summary does not depend on the thread count.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::channel::{generate_channel, transmit_power_watts, ChannelConfig};
use crate::dc_combining::{optimize_dc, svd_transmit_baseline, DcOptConfig};
use crate::error::{Result, WptError};
use crate::linalg::{inner, norm, ComplexMatrix, C64};
use crate::rectenna::{make_coefficients, pout_dc_combining, RectennaParams, TaylorCoefficients};
use crate::rf_combining::{optimize_rf_analog, optimize_rf_svd, AnalogConfig};
use crate::rng;

pub const CSV_HEADER: &str = "m,q,scheme,mean_pout_w,stderr_pout_w,mean_rf_w,mean_r1,mean_r2,n_ok,n_failed";

/// Ordered by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// DC combining, optimized transmit beamformer.
    DcOpt,
    /// DC combining, top right singular vector.
    DcSvd,
    /// RF combining with the analog phase-shifter combiner.
    RfAbf,
    /// RF combining with the unconstrained SVD pair.
    RfSvd,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::DcOpt, Scheme::DcSvd, Scheme::RfAbf, Scheme::RfSvd];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DcOpt => "dc_opt",
            Scheme::DcSvd => "dc_svd",
            Scheme::RfAbf => "rf_abf",
            Scheme::RfSvd => "rf_svd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| WptError::Config(format!("unknown scheme `{s}`")))
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub m_values: Vec<usize>,
    pub q_values: Vec<usize>,
    pub n_realizations: usize,
    pub master_seed: u64,
    pub path_loss_db: f64,
    pub transmit_power_dbm: f64,
    pub rectenna: RectennaParams,
    pub dc_opt: DcOptConfig,
    pub analog: AnalogConfig,
    pub schemes: Vec<Scheme>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m_values: vec![1, 2, 4],
            q_values: vec![1, 2, 4, 8],
            n_realizations: 500,
            master_seed: 2024,
            path_loss_db: 66.0,
            transmit_power_dbm: 36.0,
            rectenna: RectennaParams::default(),
            dc_opt: DcOptConfig::default(),
            analog: AnalogConfig::default(),
            schemes: Scheme::ALL.to_vec(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_realizations == 0 {
            return Err(WptError::Config("n_realizations must be at least 1".into()));
        }
        if self.schemes.is_empty() {
            return Err(WptError::Config("at least one scheme required".into()));
        }
        if self.m_values.iter().chain(&self.q_values).any(|&v| v == 0) {
            return Err(WptError::Config("antenna counts must be at least 1".into()));
        }
        self.rectenna.validate()?;
        self.dc_opt.validate()?;
        if self.analog.l_randomizations == 0 {
            return Err(WptError::Config("l_randomizations must be at least 1".into()));
        }
        self.channel_config(1, 1).validate()
    }

    /// Channel settings of one grid cell.
    pub fn channel_config(&self, m: usize, q: usize) -> ChannelConfig {
        ChannelConfig {
            m_tx: m,
            q_rx: q,
            path_loss_db: self.path_loss_db,
            transmit_power_dbm: self.transmit_power_dbm,
            seed: rng::derive_seed(&[self.master_seed, m as u64, q as u64]),
        }
    }
}

/// `1/2 ||H w_T||^2` without a combiner, `1/2 |w_R^H H w_T|^2` with one.
pub fn received_rf_power(h: &ComplexMatrix, w_t: &[C64], w_r: Option<&[C64]>) -> Result<f64> {
    if w_t.len() != h.cols() {
        return Err(WptError::invalid("transmit beamformer length must equal M"));
    }
    let y = h.mul_vec(w_t);
    match w_r {
        None => Ok(0.5 * norm(&y).powi(2)),
        Some(w) if w.len() == h.rows() => Ok(0.5 * inner(w, &y).norm_sqr()),
        Some(_) => Err(WptError::invalid("combiner length must equal Q")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeOutcome {
    pub p_out: f64,
    pub rf_power: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    /// Outer-loop objective values, `dc_opt` only.
    pub objective_trace: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct RealizationRecord {
    pub m: usize,
    pub q: usize,
    pub index: u64,
    /// In the order of the configured schemes; failures carry the message.
    pub outcomes: Vec<(Scheme, std::result::Result<SchemeOutcome, String>)>,
}

impl RealizationRecord {
    pub fn outcome(&self, scheme: Scheme) -> Option<&SchemeOutcome> {
        self.outcomes
            .iter()
            .find(|(s, _)| *s == scheme)
            .and_then(|(_, o)| o.as_ref().ok())
    }
}

fn run_scheme(
    scheme: Scheme,
    h: &ComplexMatrix,
    power: f64,
    coeffs: &TaylorCoefficients,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<SchemeOutcome> {
    let r_load = cfg.rectenna.r_load;
    match scheme {
        Scheme::DcOpt => {
            let dc_cfg = DcOptConfig {
                randomization_seed: rng::derive_seed(&[seed, 1]),
                ..cfg.dc_opt.clone()
            };
            let res = optimize_dc(h, power, coeffs, r_load, &dc_cfg)?;
            Ok(SchemeOutcome {
                p_out: res.p_out,
                rf_power: received_rf_power(h, &res.w_t, None)?,
                r1: Some(res.r1_ratio),
                r2: None,
                objective_trace: Some(res.objective_trace),
            })
        }
        Scheme::DcSvd => {
            let w_t = svd_transmit_baseline(h, power)?;
            Ok(SchemeOutcome {
                p_out: pout_dc_combining(h, &w_t, coeffs, r_load)?,
                rf_power: received_rf_power(h, &w_t, None)?,
                r1: None,
                r2: None,
                objective_trace: None,
            })
        }
        Scheme::RfAbf => {
            let analog = AnalogConfig {
                seed: rng::derive_seed(&[seed, 2]),
                ..cfg.analog.clone()
            };
            let res = optimize_rf_analog(h, power, coeffs, r_load, &analog)?;
            Ok(SchemeOutcome {
                p_out: res.p_out,
                rf_power: received_rf_power(h, &res.w_t, Some(&res.w_r))?,
                r1: res.r1_ratio,
                r2: res.r2_ratio,
                objective_trace: None,
            })
        }
        Scheme::RfSvd => {
            let res = optimize_rf_svd(h, power, coeffs, r_load)?;
            Ok(SchemeOutcome {
                p_out: res.p_out,
                rf_power: received_rf_power(h, &res.w_t, Some(&res.w_r))?,
                r1: None,
                r2: None,
                objective_trace: None,
            })
        }
    }
}

/// Runs every configured scheme on realization `index` of cell `(m, q)`.
pub fn run_realization(cfg: &ExperimentConfig, m: usize, q: usize, index: u64) -> Result<RealizationRecord> {
    let coeffs = make_coefficients(&cfg.rectenna)?;
    let ch = cfg.channel_config(m, q);
    Ok(realization(cfg, &ch, &coeffs, index))
}

fn realization(
    cfg: &ExperimentConfig,
    ch: &ChannelConfig,
    coeffs: &TaylorCoefficients,
    index: u64,
) -> RealizationRecord {
    let h = generate_channel(ch, index);
    let power = transmit_power_watts(ch);
    let seed = rng::derive_seed(&[ch.seed, index]);
    let outcomes = cfg
        .schemes
        .iter()
        .map(|&s| (s, run_scheme(s, &h, power, coeffs, cfg, seed).map_err(|e| e.to_string())))
        .collect();
    RealizationRecord {
        m: ch.m_tx,
        q: ch.q_rx,
        index,
        outcomes,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub m: usize,
    pub q: usize,
    pub scheme: Scheme,
    pub mean_p_out: f64,
    pub std_err: f64,
    pub mean_rf_power: f64,
    pub mean_r1: Option<f64>,
    pub mean_r2: Option<f64>,
    pub n_ok: usize,
    pub n_failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct McSummary {
    /// Sorted by `(m, q, scheme)`.
    pub cells: Vec<CellSummary>,
}

impl McSummary {
    pub fn cell(&self, m: usize, q: usize, scheme: Scheme) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.m == m && c.q == q && c.scheme == scheme)
    }

    pub fn total_failed(&self) -> usize {
        self.cells.iter().map(|c| c.n_failed).sum()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn summarize_cell(m: usize, q: usize, scheme: Scheme, records: &[RealizationRecord]) -> CellSummary {
    let mut ok = Vec::new();
    let mut n_failed = 0;
    for rec in records {
        for (s, o) in &rec.outcomes {
            if *s != scheme {
                continue;
            }
            match o {
                Ok(o) => ok.push(o),
                Err(_) => n_failed += 1,
            }
        }
    }
    let p: Vec<f64> = ok.iter().map(|o| o.p_out).collect();
    let rf: Vec<f64> = ok.iter().map(|o| o.rf_power).collect();
    let optional_mean = |f: fn(&SchemeOutcome) -> Option<f64>| {
        let v: Vec<f64> = ok.iter().filter_map(|o| f(o)).collect();
        (!v.is_empty()).then(|| mean(&v))
    };
    let n = p.len();
    let mean_p_out = mean(&p);
    let std_err = if n > 1 {
        let var = p.iter().map(|x| (x - mean_p_out).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    CellSummary {
        m,
        q,
        scheme,
        mean_p_out,
        std_err,
        mean_rf_power: mean(&rf),
        mean_r1: optional_mean(|o| o.r1),
        mean_r2: optional_mean(|o| o.r2),
        n_ok: n,
        n_failed,
    }
}

/// Like [`run_experiment`], also returning every realization record in
/// `(m, q, index)` order.
pub fn run_experiment_with_records(cfg: &ExperimentConfig) -> Result<(McSummary, Vec<RealizationRecord>)> {
    cfg.validate()?;
    let coeffs = make_coefficients(&cfg.rectenna)?;
    let mut schemes = cfg.schemes.clone();
    schemes.sort();
    schemes.dedup();

    let mut cells = Vec::new();
    let mut all = Vec::new();
    let mut grid: Vec<(usize, usize)> = cfg
        .m_values
        .iter()
        .flat_map(|&m| cfg.q_values.iter().map(move |&q| (m, q)))
        .collect();
    grid.sort();
    grid.dedup();
    for (m, q) in grid {
        let ch = cfg.channel_config(m, q);
        let records: Vec<RealizationRecord> = (0..cfg.n_realizations as u64)
            .into_par_iter()
            .map(|i| realization(cfg, &ch, &coeffs, i))
            .collect();
        for &s in &schemes {
            cells.push(summarize_cell(m, q, s, &records));
        }
        all.extend(records);
    }
    Ok((McSummary { cells }, all))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<McSummary> {
    run_experiment_with_records(cfg).map(|(s, _)| s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn summary_to_csv(summary: &McSummary) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &summary.cells {
        writeln!(
            out,
            "{},{},{},{:e},{:e},{:e},{},{},{},{}",
            c.m,
            c.q,
            c.scheme,
            c.mean_p_out,
            c.std_err,
            c.mean_rf_power,
            opt(c.mean_r1),
            opt(c.mean_r2),
            c.n_ok,
            c.n_failed
        )
        .expect("writing to a String");
    }
    out
}

pub fn emit_csv(summary: &McSummary, path: &Path) -> Result<()> {
    std::fs::write(path, summary_to_csv(summary))?;
    Ok(())
}

pub fn parse_summary_csv(text: &str) -> Result<McSummary> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(WptError::Parse {
                line: 1,
                column: 1,
                message: "missing or unexpected header".into(),
            })
        }
    }
    let mut cells = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = |column: usize, message: String| WptError::Parse { line: i + 1, column, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(err(1, format!("expected 10 fields, found {}", fields.len())));
        }
        let col = |k: usize| fields[..k].iter().map(|f| f.len() + 1).sum::<usize>() + 1;
        let uint = |k: usize| {
            fields[k]
                .parse::<usize>()
                .map_err(|e| err(col(k), format!("`{}`: {e}", fields[k])))
        };
        let float = |k: usize| {
            fields[k]
                .parse::<f64>()
                .map_err(|e| err(col(k), format!("`{}`: {e}", fields[k])))
        };
        let optional = |k: usize| if fields[k].is_empty() { Ok(None) } else { float(k).map(Some) };
        cells.push(CellSummary {
            m: uint(0)?,
            q: uint(1)?,
            scheme: Scheme::parse(fields[2]).map_err(|e| err(col(2), e.to_string()))?,
            mean_p_out: float(3)?,
            std_err: float(4)?,
            mean_rf_power: float(5)?,
            mean_r1: optional(6)?,
            mean_r2: optional(7)?,
            n_ok: uint(8)?,
            n_failed: uint(9)?,
        });
    }
    Ok(McSummary { cells })
}
