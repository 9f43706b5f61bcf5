//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, parse or configuration
//! error, 3 solver failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::{channel_from_csv, dbm_to_watts, watts_to_dbm};
use crate::config::{RunConfig, ScalingConfig};
use crate::dc_combining::{optimize_dc, svd_transmit_baseline, DcOptConfig};
use crate::error::{Result, WptError};
use crate::harness::{run_experiment, summary_to_csv, McSummary, Scheme};
use crate::linalg::C64;
use crate::rectenna::{make_coefficients, pout_dc_combining};
use crate::rf_combining::{optimize_rf_analog, optimize_rf_svd, AnalogConfig};
use crate::scaling::{montecarlo_average, ScalingInputs, ScalingScheme};

#[derive(Parser, Debug)]
#[command(name = "mimo-wpt", version, about = "Beamforming for MIMO wireless power transfer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimize beamformers for a single channel read from CSV.
    Optimize(OptimizeArgs),
    /// Monte Carlo sweep over the configured (M, Q) grid.
    Montecarlo(SweepArgs),
    /// Closed-form scaling laws against Monte Carlo averages.
    Scaling(SweepArgs),
    /// Relaxation ratios of the analog combiner over the grid.
    Tightness(SweepArgs),
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Channel CSV, one row per receive antenna, interleaved re,im.
    #[arg(long)]
    pub channel: PathBuf,
    /// dc_opt, dc_svd, rf_abf or rf_svd.
    #[arg(long)]
    pub scheme: String,
    #[arg(long, allow_hyphen_values = true)]
    pub power_dbm: f64,
    /// Rectenna and solver settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Randomization seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the master seed of the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

pub fn exit_code(err: &WptError) -> i32 {
    match err {
        WptError::Io(_) => 1,
        WptError::InvalidInput(_) | WptError::Config(_) | WptError::Parse { .. } => 2,
        _ => 3,
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Optimize(a) => {
            let report = optimize_report(&a)?;
            out.write_all(report.as_bytes())?;
            Ok(())
        }
        Command::Montecarlo(a) => sweep(&a, out, |cfg| Ok(summary_to_csv(&run_experiment(&cfg.experiment)?))),
        Command::Scaling(a) => sweep(&a, out, scaling_csv),
        Command::Tightness(a) => sweep(&a, out, |cfg| {
            let mut cfg = cfg.clone();
            cfg.experiment.schemes = vec![Scheme::RfAbf];
            Ok(tightness_csv(&run_experiment(&cfg.experiment)?))
        }),
    }
}

fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for o in overrides {
        cfg.apply_override(o)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(a: &SweepArgs, out: &mut dyn Write, body: impl Fn(&RunConfig) -> Result<String> + Send + Sync) -> Result<()> {
    let mut cfg = load_config(Some(&a.config), &a.overrides)?;
    if let Some(seed) = a.seed {
        cfg.experiment.master_seed = seed;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.threads {
        if n == 0 {
            return Err(WptError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| WptError::Config(format!("thread pool: {e}")))?;
    let csv = pool.install(|| body(&cfg))?;
    std::fs::write(&a.out, &csv)?;
    writeln!(out, "wrote {} rows to {}", csv.lines().count().saturating_sub(1), a.out.display())?;
    Ok(())
}

fn complex_list(v: &[C64]) -> String {
    v.iter()
        .map(|z| format!("{:e}{:+e}j", z.re, z.im))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The text printed by `optimize`.
pub fn optimize_report(a: &OptimizeArgs) -> Result<String> {
    let cfg = load_config(a.config.as_deref(), &a.overrides)?;
    let scheme = Scheme::parse(&a.scheme)?;
    let text = std::fs::read_to_string(&a.channel)?;
    let h = channel_from_csv(&text)?;
    if !a.power_dbm.is_finite() {
        return Err(WptError::invalid("--power-dbm must be finite"));
    }
    let power = dbm_to_watts(a.power_dbm);
    let rect = &cfg.experiment.rectenna;
    let coeffs = make_coefficients(rect)?;

    let mut r = String::new();
    let w = &mut r;
    writeln!(w, "scheme = {scheme}").ok();
    writeln!(w, "m = {}", h.cols()).ok();
    writeln!(w, "q = {}", h.rows()).ok();
    writeln!(w, "power_w = {power:e}").ok();
    let p_out = match scheme {
        Scheme::DcOpt => {
            let dc = DcOptConfig {
                randomization_seed: a.seed,
                ..cfg.experiment.dc_opt.clone()
            };
            let res = optimize_dc(&h, power, &coeffs, rect.r_load, &dc)?;
            writeln!(w, "iterations = {}", res.iterations).ok();
            writeln!(w, "converged = {}", res.converged).ok();
            writeln!(w, "r1 = {:e}", res.r1_ratio).ok();
            writeln!(w, "w_t = {}", complex_list(&res.w_t)).ok();
            res.p_out
        }
        Scheme::DcSvd => {
            let w_t = svd_transmit_baseline(&h, power)?;
            writeln!(w, "w_t = {}", complex_list(&w_t)).ok();
            pout_dc_combining(&h, &w_t, &coeffs, rect.r_load)?
        }
        Scheme::RfSvd => {
            let res = optimize_rf_svd(&h, power, &coeffs, rect.r_load)?;
            writeln!(w, "w_t = {}", complex_list(&res.w_t)).ok();
            writeln!(w, "w_r = {}", complex_list(&res.w_r)).ok();
            res.p_out
        }
        Scheme::RfAbf => {
            let analog = AnalogConfig {
                seed: a.seed,
                ..cfg.experiment.analog.clone()
            };
            let res = optimize_rf_analog(&h, power, &coeffs, rect.r_load, &analog)?;
            writeln!(w, "r1 = {:e}", res.r1_ratio.unwrap_or(f64::NAN)).ok();
            writeln!(w, "r2 = {:e}", res.r2_ratio.unwrap_or(f64::NAN)).ok();
            writeln!(w, "w_t = {}", complex_list(&res.w_t)).ok();
            writeln!(w, "w_r = {}", complex_list(&res.w_r)).ok();
            if let Some(c) = &res.combiner {
                let theta: Vec<String> = c.phases().iter().map(|t| format!("{t:e}")).collect();
                writeln!(w, "theta = {}", theta.join(" ")).ok();
            }
            res.p_out
        }
    };
    writeln!(w, "p_out_w = {p_out:e}").ok();
    writeln!(w, "p_out_dbm = {:e}", watts_to_dbm(p_out)).ok();
    Ok(r)
}

pub const SCALING_HEADER: &str = "antennas,scheme,analytic_watts,montecarlo_watts,n_samples";

/// Closed forms against Monte Carlo for every configured antenna count.
pub fn scaling_csv(cfg: &RunConfig) -> Result<String> {
    let coeffs = make_coefficients(&cfg.experiment.rectenna)?;
    let truncation = coeffs.n0();
    let s: &ScalingConfig = &cfg.scaling;
    let seed = cfg.experiment.master_seed;
    let mut jobs: Vec<(ScalingScheme, u32, usize)> = Vec::new();
    jobs.extend(s.m_values.iter().map(|&m| (ScalingScheme::MisoMrt, m, s.samples)));
    jobs.extend(s.q_values.iter().map(|&q| (ScalingScheme::SimoDc, q, s.samples)));
    jobs.extend(s.q_values.iter().map(|&q| (ScalingScheme::SimoRfMrc, q, s.samples)));
    jobs.extend(s.analog_q_values.iter().map(|&q| (ScalingScheme::SimoRfAnalog, q, s.analog_samples)));

    let mut csv = format!("{SCALING_HEADER}\n");
    for (scheme, antennas, samples) in jobs {
        let inputs = ScalingInputs::from_coefficients(antennas, s.power_w, &coeffs, truncation)?;
        let mc = montecarlo_average(scheme, &inputs, samples, seed)?;
        writeln!(
            csv,
            "{antennas},{},{:e},{:e},{samples}",
            scheme.name(),
            scheme.analytic(&inputs),
            mc.mean
        )
        .ok();
    }
    Ok(csv)
}

pub const TIGHTNESS_HEADER: &str = "m,q,mean_r1,mean_r2,n_ok,n_failed";

pub fn tightness_csv(summary: &McSummary) -> String {
    let mut csv = format!("{TIGHTNESS_HEADER}\n");
    for c in summary.cells.iter().filter(|c| c.scheme == Scheme::RfAbf) {
        let f = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        writeln!(csv, "{},{},{},{},{},{}", c.m, c.q, f(c.mean_r1), f(c.mean_r2), c.n_ok, c.n_failed).ok();
    }
    csv
}
