//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if
//! any criterion failed. Run with `--nocapture` to see the table.

mod common;

use common::*;
use mimo_wpt::cli::scaling_csv;
use mimo_wpt::config::RunConfig;
use mimo_wpt::dc_combining::{optimize_dc, DcOptConfig};
use mimo_wpt::harness::{run_experiment, run_experiment_with_records, summary_to_csv, ExperimentConfig, McSummary, Scheme};
use mimo_wpt::linalg::{norm1, quad_form};
use mimo_wpt::rf_combining::{optimize_rf_analog, AnalogConfig};
use mimo_wpt::scaling::{montecarlo_average, ScalingInputs, ScalingScheme};

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {id}: {detail}");
        self.lines.push((id.to_string(), pass, detail));
    }
}

fn unit_inputs(antennas: u32) -> ScalingInputs {
    ScalingInputs::from_coefficients(antennas, 1.0, &coeffs(), 4).unwrap()
}

fn scaling_agreement(report: &mut Report) {
    let mut worst: (f64, String) = (0.0, String::new());
    let mut jobs = Vec::new();
    jobs.extend([1, 2, 4].map(|m| (ScalingScheme::MisoMrt, m)));
    jobs.extend([1, 2, 4, 8].map(|q| (ScalingScheme::SimoDc, q)));
    jobs.extend([1, 2, 4, 8].map(|q| (ScalingScheme::SimoRfMrc, q)));
    for (scheme, n) in jobs {
        let x = unit_inputs(n);
        let mc = montecarlo_average(scheme, &x, 100_000, 11).unwrap();
        let err = (mc.mean / scheme.analytic(&x) - 1.0).abs();
        if err >= worst.0 {
            worst = (err, format!("{} n={n}", scheme.name()));
        }
    }
    report.record(
        "1 scaling laws",
        worst.0 < 0.05,
        format!("worst relative error {:.3}% at {} (limit 5%)", 100.0 * worst.0, worst.1),
    );
}

fn analog_bound(report: &mut Report) {
    let mut ratios = Vec::new();
    let mut above = true;
    for q in [8, 12, 16, 24, 32] {
        let x = unit_inputs(q);
        let mc = montecarlo_average(ScalingScheme::SimoRfAnalog, &x, 10_000, 12).unwrap();
        let bound = ScalingScheme::SimoRfAnalog.analytic(&x);
        above &= mc.mean >= bound;
        ratios.push(bound / mc.mean);
    }
    let monotone = ratios.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    report.record(
        "2 analog lower bound",
        above && monotone,
        format!("bound below average: {above}, bound/average over Q=8..32: [{}]", shown.join(", ")),
    );
}

fn tightness(report: &mut Report) {
    let cfg = ExperimentConfig {
        m_values: vec![1, 2, 4],
        q_values: vec![2, 4, 8],
        n_realizations: 500,
        schemes: vec![Scheme::RfAbf],
        ..ExperimentConfig::default()
    };
    let s = run_experiment(&cfg).unwrap();
    let (mut min_r1, mut min_r2) = (f64::MAX, f64::MAX);
    for c in &s.cells {
        min_r1 = min_r1.min(c.mean_r1.unwrap());
        min_r2 = min_r2.min(c.mean_r2.unwrap());
    }
    let single = run_experiment(&ExperimentConfig { m_values: vec![1], q_values: vec![1], ..cfg.clone() }).unwrap();
    let c11 = &single.cells[0];
    let exact = c11.mean_r1 == Some(1.0) && c11.mean_r2 == Some(1.0);
    report.record(
        "3 relaxation tightness",
        min_r2 >= 0.995 && min_r1 >= 0.93 && exact && s.total_failed() == 0,
        format!(
            "min mean R2 {min_r2:.4} (>= 0.995), min mean R1 {min_r1:.4} (>= 0.93), M=Q=1 exact: {exact}, failures {}",
            s.total_failed()
        ),
    );
}

fn dominance(report: &mut Report, traces: &mut Vec<Vec<f64>>) -> McSummary {
    let cfg = ExperimentConfig { n_realizations: 200, master_seed: 404, ..ExperimentConfig::default() };
    let (summary, records) = run_experiment_with_records(&cfg).unwrap();
    let mut violations = 0;
    for r in &records {
        let p = |s| r.outcome(s).map(|o| o.p_out);
        let (Some(opt), Some(svd), Some(abf), Some(rf)) =
            (p(Scheme::DcOpt), p(Scheme::DcSvd), p(Scheme::RfAbf), p(Scheme::RfSvd))
        else {
            continue;
        };
        if rf < abf - 1e-9 || rf < opt * (1.0 - 1e-3) || opt < svd - 1e-9 {
            violations += 1;
        }
        if let Some(t) = r.outcome(Scheme::DcOpt).and_then(|o| o.objective_trace.clone()) {
            traces.push(t);
        }
    }
    let failed = summary.total_failed();
    report.record(
        "4 per-realization dominance",
        violations == 0 && failed == 0,
        format!("{} realizations, {violations} violations, {failed} solver failures", records.len()),
    );
    summary
}

fn small_scale_oracles(report: &mut Report, traces: &mut Vec<Vec<f64>>) {
    let c = coeffs();
    let dc_cfg = DcOptConfig::default();

    let mut worst_a: f64 = 0.0;
    let mut count_a = 0;
    for (m, n) in [(1, 20), (2, 40), (4, 40)] {
        let (p, hs) = channels(m, 1, 500 + m as u64, n);
        for h in &hs {
            let res = optimize_dc(h, p, &c, R_LOAD, &dc_cfg).unwrap();
            let want = mrt_closed_form(h.row(0), p, &c, R_LOAD);
            worst_a = worst_a.max((res.p_out / want - 1.0).abs());
            traces.push(res.objective_trace);
            count_a += 1;
        }
    }
    report.record(
        "5a single-receiver DC vs MRT",
        worst_a < 1e-3,
        format!("{count_a} channels, worst relative error {worst_a:.2e} (limit 1e-3)"),
    );

    let mut worst_b: f64 = 0.0;
    let mut count_b = 0;
    for (q, n) in [(2, 30), (4, 35), (8, 35)] {
        let (p, hs) = channels(1, q, 600 + q as u64, n);
        for h in &hs {
            let res = optimize_rf_analog(h, p, &c, R_LOAD, &AnalogConfig::default()).unwrap();
            let mut g = h.matmul(&h.adjoint());
            g.hermitianize();
            let achieved = quad_form(&g, &res.w_r);
            let want = norm1(&h.column(0)).powi(2) / q as f64;
            worst_b = worst_b.max((achieved / want - 1.0).abs());
            count_b += 1;
        }
    }
    report.record(
        "5b single-transmitter analog vs phase alignment",
        worst_b < 1e-3,
        format!("{count_b} channels, worst relative error {worst_b:.2e} (limit 1e-3)"),
    );

    let (p, hs) = channels(2, 2, 700, 20);
    let (mut worst_dc, mut worst_abf): (f64, f64) = (0.0, 0.0);
    for h in &hs {
        let dc = optimize_dc(h, p, &c, R_LOAD, &dc_cfg).unwrap();
        traces.push(dc.objective_trace.clone());
        worst_dc = worst_dc.max(1.0 - dc.p_out / dc_grid_oracle(h, p, &c));
        let abf = optimize_rf_analog(h, p, &c, R_LOAD, &AnalogConfig::default()).unwrap();
        let (_, oracle) = analog_grid_oracle(h, p, &c, 20_000);
        worst_abf = worst_abf.max(1.0 - abf.p_out / oracle);
    }
    report.record(
        "5c two-by-two vs grid search",
        worst_dc < 5e-3 && worst_abf < 5e-3,
        format!("20 channels, worst shortfall DC {worst_dc:.2e}, analog {worst_abf:.2e} (limit 5e-3)"),
    );
}

fn monotone_traces(report: &mut Report, traces: &[Vec<f64>]) {
    let bad = traces
        .iter()
        .filter(|t| t.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-8)))
        .count();
    report.record(
        "6 successive approximation monotone",
        bad == 0 && !traces.is_empty(),
        format!("{} traces, {bad} with a decrease beyond 1e-8 relative", traces.len()),
    );
}

fn nonlinearity_signature(report: &mut Report, summary: &McSummary) {
    let mut bad = Vec::new();
    for m in [2, 4] {
        for q in [2, 4, 8] {
            let opt = summary.cell(m, q, Scheme::DcOpt).unwrap();
            let svd = summary.cell(m, q, Scheme::DcSvd).unwrap();
            if !(opt.mean_rf_power <= svd.mean_rf_power && opt.mean_p_out >= svd.mean_p_out) {
                bad.push(format!("({m},{q})"));
            }
        }
    }
    report.record(
        "7 less RF power, more DC power",
        bad.is_empty(),
        format!("6 cells, failing: [{}]", bad.join(" ")),
    );
}

fn rf_over_dc_ratio(report: &mut Report) {
    let x = unit_inputs(10);
    let rf = montecarlo_average(ScalingScheme::SimoRfMrc, &x, 100_000, 13).unwrap();
    let dc = montecarlo_average(ScalingScheme::SimoDc, &x, 100_000, 13).unwrap();
    let mc = rf.mean / dc.mean;
    let analytic = ScalingScheme::SimoRfMrc.analytic(&x) / ScalingScheme::SimoDc.analytic(&x);
    let err = (mc / analytic - 1.0).abs();
    report.record(
        "8 RF/DC combining gain at Q=10",
        err < 0.1,
        format!("Monte Carlo {mc:.3} vs closed form {analytic:.3}, relative error {:.2}% (limit 10%)", 100.0 * err),
    );
}

fn determinism(report: &mut Report, first: &McSummary) {
    let cfg = ExperimentConfig { n_realizations: 200, master_seed: 404, ..ExperimentConfig::default() };
    let again = run_experiment(&cfg).unwrap();
    let sweep_same = summary_to_csv(first) == summary_to_csv(&again);
    let run = RunConfig::default();
    let scaling_same = scaling_csv(&run).unwrap() == scaling_csv(&run).unwrap();
    report.record(
        "9 determinism",
        sweep_same && scaling_same,
        format!("sweep CSV identical: {sweep_same}, scaling CSV identical: {scaling_same}"),
    );
}

#[test]
fn acceptance_criteria() {
    let mut report = Report { lines: Vec::new() };
    let mut traces = Vec::new();
    scaling_agreement(&mut report);
    analog_bound(&mut report);
    tightness(&mut report);
    let grid = dominance(&mut report, &mut traces);
    small_scale_oracles(&mut report, &mut traces);
    monotone_traces(&mut report, &traces);
    nonlinearity_signature(&mut report, &grid);
    rf_over_dc_ratio(&mut report);
    determinism(&mut report, &grid);

    let failed: Vec<&str> = report.lines.iter().filter(|l| !l.1).map(|l| l.0.as_str()).collect();
    println!("{} of {} criteria passed", report.lines.len() - failed.len(), report.lines.len());
    assert!(failed.is_empty(), "failed: {failed:?}");
}
