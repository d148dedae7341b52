//! Batch experiment driver: run replicas with derived seeds, persist CSV
//! rows, aggregate, and attach a closed-form oracle verdict when one
//! applies.
//!
//! Replicas may run concurrently; outputs are written by a single writer
//! in replica-index order, and every in-replica reduction has a fixed
//! order, so a config plus master seed produces byte-identical CSV files
//! regardless of thread count.
//!
//! CSV dialect: comma separators, `.` decimal point, one header row,
//! UTF-8, LF line endings, floats in Rust's shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::config::{DriftConfig, EnergyConfig, ExperimentConfig, ExperimentKind, KernelConfig};
use crate::cover::{
    estimate_dimension, graph_cloud, hit_count_statistic, occupancy, range_cloud, DimEstimate,
    Gauge, ScalingLedger,
};
use crate::energy::{
    capacity_threshold, path_graph_family, time_set_family, SharedStableSamples, ThresholdReport,
};
use crate::error::{Error, Result};
use crate::formulas::{self, FormulaResult, FormulaValue};
use crate::rng::mix64;
use crate::stable::{simulate_path, StableParams};

/// Slack added below a kernel envelope exponent when judging a fitted
/// slope.
pub const ENVELOPE_SLACK: f64 = 0.1;

/// Minimum fraction of replicas that must succeed for a clean exit.
pub const MIN_SUCCESS_RATE: f64 = 0.8;

/// Outcome of one replica.
#[derive(Debug, Clone)]
pub struct ReplicaOutcome {
    pub replica: usize,
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub error: Option<String>,
}

/// Aggregated result of an experiment run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config_hash: u64,
    pub kind: ExperimentKind,
    pub replicas: Vec<ReplicaOutcome>,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub oracle: Option<FormulaResult>,
    pub tolerance: f64,
    /// `Some(true/false)` when an oracle applied, `None` otherwise.
    pub passed: Option<bool>,
    /// At least [`MIN_SUCCESS_RATE`] of replicas succeeded.
    pub success_rate_ok: bool,
}

impl RunRecord {
    /// Process exit code: 0 all pass, 1 tolerance failure, 3 runtime
    /// failure (too many failed replicas).
    pub fn exit_code(&self) -> i32 {
        if !self.success_rate_ok {
            3
        } else if self.passed == Some(false) {
            1
        } else {
            0
        }
    }
}

/// Everything a run may persist.
#[derive(Debug, Clone, Default)]
pub struct RunArtifacts {
    /// Ledger of replica 0 for estimator kinds.
    pub ledger: Option<ScalingLedger>,
    pub estimate: Option<DimEstimate>,
    /// Kernel sweep rows.
    pub kernel_rows: Vec<KernelSweepRow>,
    /// Capacity threshold report of replica 0.
    pub threshold: Option<ThresholdReport>,
    /// Hit-count rows of replica 0 as `(k, mean, windows)`.
    pub hit_rows: Vec<(u32, f64, usize)>,
    /// Formula table rows.
    pub formula_rows: Vec<FormulaResult>,
}

/// One row of a kernel sweep.
#[derive(Debug, Clone, Copy)]
pub struct KernelSweepRow {
    pub alpha: f64,
    pub d: usize,
    pub beta: f64,
    pub tau: f64,
    pub delta_norm: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub clip_rate: f64,
}

/// Run an experiment and, when `config.out_dir` is set, persist its CSV
/// outputs there.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let (record, artifacts) = execute(config)?;
    if let Some(dir) = &config.out_dir {
        write_outputs(dir, config, &record, &artifacts)?;
    }
    Ok((record, artifacts))
}

fn execute(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    match config.kind {
        ExperimentKind::GraphDim | ExperimentKind::RangeDim | ExperimentKind::ParabolicDim => {
            run_estimator(config)
        }
        ExperimentKind::KernelSweep => run_kernel_sweep(config),
        ExperimentKind::EnergyThreshold => run_energy_threshold(config),
        ExperimentKind::HitCount => run_hitcount(config),
        ExperimentKind::FormulaTable => run_formula_table(config),
    }
}

fn aggregate(
    config: &ExperimentConfig,
    replicas: Vec<ReplicaOutcome>,
    oracle: Option<FormulaResult>,
) -> RunRecord {
    let values: Vec<f64> = replicas.iter().filter_map(|r| r.value).collect();
    let (mean, stderr) = if values.is_empty() {
        (None, None)
    } else {
        let (m, s) = crate::stats::mean_stderr(&values);
        (Some(m), Some(s))
    };
    let passed = match (&oracle, mean) {
        (Some(o), Some(m)) => Some(o.value.contains(m, config.tolerance)),
        _ => None,
    };
    let success_rate_ok = values.len() as f64 >= MIN_SUCCESS_RATE * config.n_replicas as f64;
    RunRecord {
        config_hash: config.hash(),
        kind: config.kind,
        replicas,
        mean,
        stderr,
        oracle,
        tolerance: config.tolerance,
        passed,
        success_rate_ok,
    }
}

fn outcome(replica: usize, result: Result<(f64, f64)>) -> ReplicaOutcome {
    match result {
        Ok((value, stderr)) => ReplicaOutcome {
            replica,
            value: Some(value),
            stderr: Some(stderr),
            error: None,
        },
        Err(e) => ReplicaOutcome {
            replica,
            value: None,
            stderr: None,
            error: Some(e.to_string()),
        },
    }
}

/// Closed-form oracle for an estimator experiment, when one applies.
fn estimator_oracle(config: &ExperimentConfig) -> Result<Option<FormulaResult>> {
    let ts = config.time_set.build()?;
    let dim_t = match ts.known_dim {
        Some(v) => v,
        None => return Ok(None),
    };
    let alpha = config.params.alpha();
    let d = config.params.dim();
    match (&config.drift, config.kind) {
        (DriftConfig::Zero | DriftConfig::Constant(_), ExperimentKind::GraphDim) => {
            let phi = formulas::constant_drift_phi(alpha, dim_t)?.value.point();
            Ok(Some(formulas::graph_dim_with_drift(alpha, d, phi)?))
        }
        (DriftConfig::Zero | DriftConfig::Constant(_), ExperimentKind::RangeDim) => {
            Ok(Some(formulas::process_range_dim(alpha, d, dim_t)?))
        }
        (DriftConfig::Zero | DriftConfig::Constant(_), ExperimentKind::ParabolicDim) => {
            Ok(Some(formulas::process_graph_phi(alpha, dim_t)?))
        }
        (
            DriftConfig::Power { beta } | DriftConfig::Weierstrass { beta, .. },
            ExperimentKind::GraphDim,
        ) => {
            let bound = formulas::holder_phi_upper(alpha.max(1.0), d, dim_t, *beta)?
                .value
                .point();
            let hi = formulas::graph_dim_with_drift(alpha, d, bound.min(d as f64 + 1.0))?
                .value
                .point();
            Ok(Some(FormulaResult {
                value: FormulaValue::Interval { lo: 0.0, hi },
                theorem: "holder_graph_upper",
                assumptions: format!("alpha={alpha}; d={d}; dim_T={dim_t}; holder_beta={beta}"),
            }))
        }
        (
            DriftConfig::Power { beta } | DriftConfig::Weierstrass { beta, .. },
            ExperimentKind::RangeDim,
        ) => {
            let bound = formulas::holder_phi_upper(alpha.max(1.0), d, dim_t, *beta)?
                .value
                .point();
            let hi = formulas::range_dim_with_drift(alpha, d, bound.min(d as f64 + 1.0))?
                .value
                .point();
            Ok(Some(FormulaResult {
                value: FormulaValue::Interval { lo: 0.0, hi },
                theorem: "holder_range_upper",
                assumptions: format!("alpha={alpha}; d={d}; dim_T={dim_t}; holder_beta={beta}"),
            }))
        }
        _ => Ok(None),
    }
}

fn run_estimator(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let ts = config.time_set.build()?;
    let grid = ts.to_grid()?;
    let drift = config.drift.build(&config.params, &config.time_set)?;
    let gauge_alpha = match config.kind {
        ExperimentKind::ParabolicDim => config.params.alpha(),
        _ => 1.0,
    };
    let levels = config.levels();
    let results: Vec<Result<(DimEstimate, Option<ScalingLedger>)>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| {
            let path = simulate_path(&config.params, &grid, mix64(config.seed, r as u64));
            let mut cloud = match config.kind {
                ExperimentKind::RangeDim => range_cloud(&path, &drift)?,
                _ => graph_cloud(&path, &drift)?,
            };
            // Horizons beyond 1 are mapped into [0,1] before counting;
            // the slope is unaffected.
            if config.kind != ExperimentKind::RangeDim && config.time_set.t_max > 1.0 {
                cloud = cloud.rescale_time(config.time_set.t_max);
            }
            let ledger = occupancy(&cloud, gauge_alpha, &levels, Gauge::TimeGauge)?;
            let est = estimate_dimension(&ledger)?;
            Ok((est, (r == 0).then_some(ledger)))
        })
        .collect();

    let mut artifacts = RunArtifacts::default();
    let mut replicas = Vec::with_capacity(results.len());
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok((est, ledger)) => {
                if let Some(l) = ledger {
                    artifacts.ledger = Some(l);
                    artifacts.estimate = Some(est);
                }
                replicas.push(outcome(r, Ok((est.value, est.stderr))));
            }
            Err(e) => replicas.push(outcome(r, Err(e))),
        }
    }
    let oracle = estimator_oracle(config)?;
    Ok((aggregate(config, replicas, oracle), artifacts))
}

/// Envelope exponent for a kernel sweep, per the kernel bound family.
pub fn envelope_exponent(kernel: &str, sweep: &str, alpha: f64, d: usize, beta: f64) -> f64 {
    let df = d as f64;
    match (kernel, sweep) {
        ("k_beta", "tau") => {
            if beta <= df {
                -beta / alpha
            } else {
                (1.0 - 1.0 / alpha) * df - beta
            }
        }
        ("k_beta", "delta") => {
            if alpha <= 1.0 || beta <= df {
                -beta
            } else {
                (alpha - 1.0) * df - alpha * beta
            }
        }
        ("kappa_beta", "tau") => -beta / alpha,
        ("kappa_beta", "delta") => -beta,
        _ => f64::NAN,
    }
}

fn sweep_rows(
    kc: &KernelConfig,
    params: &StableParams,
    seed: u64,
) -> Result<(Vec<KernelSweepRow>, f64, f64)> {
    let alpha = params.alpha();
    let d = params.dim();
    let shared = SharedStableSamples::generate(params, kc.n_mc, seed);
    let check_clip = |est: &crate::energy::KernelEstimate| -> Result<()> {
        if est.clip_rate >= crate::energy::CLIP_RATE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "clip rate {} >= {}: estimate invalid",
                est.clip_rate,
                crate::energy::CLIP_RATE_LIMIT
            )));
        }
        Ok(())
    };
    let scales: Vec<f64> = kc
        .scale_levels
        .iter()
        .map(|&j| 0.5f64.powi(j as i32))
        .collect();
    let mut rows = Vec::with_capacity(scales.len());
    let mut xs = Vec::with_capacity(scales.len());
    let mut ys = Vec::with_capacity(scales.len());
    match kc.sweep.as_str() {
        "tau" => {
            let delta = vec![0.0; d];
            for &tau in &scales {
                let est = match kc.kind.as_str() {
                    "k_beta" => shared.kernel_k(kc.beta, tau, &delta),
                    _ => shared.kernel_kappa(kc.beta, tau, &delta)?,
                };
                check_clip(&est)?;
                rows.push(KernelSweepRow {
                    alpha,
                    d,
                    beta: kc.beta,
                    tau,
                    delta_norm: 0.0,
                    estimate: est.mean,
                    stderr: est.stderr,
                    clip_rate: est.clip_rate,
                });
                xs.push(tau.ln());
                ys.push(est.mean.ln());
            }
        }
        "delta" => {
            // Keep |tau| inside the small-increment regime for every
            // offset in the grid.
            let min_delta = scales.iter().copied().fold(f64::INFINITY, f64::min);
            let tau = if kc.kind == "k_beta" && alpha <= 1.0 {
                min_delta
            } else {
                min_delta.powf(alpha)
            };
            for &dn in &scales {
                let mut delta = vec![0.0; d];
                delta[0] = dn;
                let est = match kc.kind.as_str() {
                    "k_beta" => shared.kernel_k(kc.beta, tau, &delta),
                    _ => shared.kernel_kappa(kc.beta, tau, &delta)?,
                };
                check_clip(&est)?;
                rows.push(KernelSweepRow {
                    alpha,
                    d,
                    beta: kc.beta,
                    tau,
                    delta_norm: dn,
                    estimate: est.mean,
                    stderr: est.stderr,
                    clip_rate: est.clip_rate,
                });
                xs.push(dn.ln());
                ys.push(est.mean.ln());
            }
        }
        other => {
            return Err(Error::Config(format!("unknown sweep variable '{other}'")));
        }
    }
    let fit = crate::stats::ols(&xs, &ys)?;
    Ok((rows, fit.slope, fit.slope_stderr))
}

fn run_kernel_sweep(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let kc = config.kernel.as_ref().expect("validated");
    let results: Vec<Result<(Vec<KernelSweepRow>, f64, f64)>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| sweep_rows(kc, &config.params, mix64(config.seed, r as u64)))
        .collect();

    let mut artifacts = RunArtifacts::default();
    let mut replicas = Vec::with_capacity(results.len());
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok((rows, slope, stderr)) => {
                if r == 0 {
                    artifacts.kernel_rows = rows;
                }
                replicas.push(outcome(r, Ok((slope, stderr))));
            }
            Err(e) => replicas.push(outcome(r, Err(e))),
        }
    }
    let exponent = envelope_exponent(
        &kc.kind,
        &kc.sweep,
        config.params.alpha(),
        config.params.dim(),
        kc.beta,
    );
    // The kernel bound is an upper envelope: the fitted decay must not be
    // steeper than the envelope exponent, up to the slack.
    let oracle = FormulaResult {
        value: FormulaValue::Interval {
            lo: exponent,
            hi: f64::INFINITY,
        },
        theorem: "kernel_envelope",
        assumptions: format!(
            "kernel={}; sweep={}; alpha={}; d={}; beta={}",
            kc.kind,
            kc.sweep,
            config.params.alpha(),
            config.params.dim(),
            kc.beta
        ),
    };
    let mut record = aggregate(config, replicas, Some(oracle));
    // Envelope slack replaces the generic tolerance.
    if let (Some(m), Some(_)) = (record.mean, record.passed) {
        record.passed = Some(m >= exponent - ENVELOPE_SLACK);
    }
    Ok((record, artifacts))
}

fn run_energy_threshold(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let ec: &EnergyConfig = config.energy.as_ref().expect("validated");
    let kernel = ec.kernel_spec(config.params.alpha())?;
    let drift = config.drift.build(&config.params, &config.time_set)?;
    let ts_grid = config.time_set.build()?.to_grid()?;

    let results: Vec<Result<(f64, ThresholdReport)>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| {
            let seed = mix64(config.seed, r as u64);
            let family = match ec.family.as_str() {
                "time_set" => time_set_family(
                    config.time_set.kind,
                    &ec.family_levels,
                    config.time_set.t_max,
                    &drift,
                )?,
                _ => {
                    let path = simulate_path(&config.params, &ts_grid, seed);
                    path_graph_family(&path, &ec.family_levels)?
                }
            };
            let report = capacity_threshold(&family, &kernel, &ec.beta_grid, seed)?;
            Ok((report.beta_star, report))
        })
        .collect();

    let mut artifacts = RunArtifacts::default();
    let mut replicas = Vec::with_capacity(results.len());
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok((beta_star, report)) => {
                if r == 0 {
                    artifacts.threshold = Some(report);
                }
                replicas.push(outcome(r, Ok((beta_star, 0.0))));
            }
            Err(e) => replicas.push(outcome(r, Err(e))),
        }
    }

    // Oracle: with the euclidean kernel the threshold recovers the
    // dimension the measure was built to witness.
    let ts = config.time_set.build()?;
    let oracle = match (&config.drift, ec.family.as_str(), ts.known_dim) {
        (DriftConfig::Zero | DriftConfig::Constant(_), "time_set", Some(dim_t))
            if matches!(kernel, crate::energy::KernelSpec::Euclidean) =>
        {
            Some(FormulaResult {
                value: FormulaValue::Point(dim_t),
                theorem: "riesz_threshold_time_set",
                assumptions: format!("dim_T={dim_t}"),
            })
        }
        (DriftConfig::Zero | DriftConfig::Constant(_), "path_graph", Some(dim_t))
            if matches!(kernel, crate::energy::KernelSpec::Euclidean) =>
        {
            let alpha = config.params.alpha();
            let d = config.params.dim();
            let phi = formulas::constant_drift_phi(alpha, dim_t)?.value.point();
            Some(formulas::graph_dim_with_drift(alpha, d, phi)?)
        }
        _ => None,
    };
    Ok((aggregate(config, replicas, oracle), artifacts))
}

type HitRows = Vec<(u32, f64, usize)>;

fn run_hitcount(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let grid = config.time_set.build()?.to_grid()?;
    let results: Vec<Result<(HitRows, f64, f64)>> = (0..config.n_replicas)
        .into_par_iter()
        .map(|r| {
            let path = simulate_path(&config.params, &grid, mix64(config.seed, r as u64));
            let mut rows = Vec::with_capacity(config.hit_levels.len());
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &k in &config.hit_levels {
                let counts = hit_count_statistic(&path, k)?;
                let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
                rows.push((k, mean, counts.len()));
                xs.push(k as f64 * std::f64::consts::LN_2);
                ys.push(mean.ln());
            }
            let fit = crate::stats::ols(&xs, &ys)?;
            Ok((rows, fit.slope, fit.slope_stderr))
        })
        .collect();

    let mut artifacts = RunArtifacts::default();
    let mut replicas = Vec::with_capacity(results.len());
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok((rows, slope, stderr)) => {
                if r == 0 {
                    artifacts.hit_rows = rows;
                }
                replicas.push(outcome(r, Ok((slope, stderr))));
            }
            Err(e) => replicas.push(outcome(r, Err(e))),
        }
    }
    Ok((aggregate(config, replicas, None), artifacts))
}

fn run_formula_table(config: &ExperimentConfig) -> Result<(RunRecord, RunArtifacts)> {
    let ts = config.time_set.build()?;
    let dim_t = ts.known_dim.unwrap_or(1.0);
    let alpha = config.params.alpha();
    let d = config.params.dim();
    let drift = config.drift.build(&config.params, &config.time_set)?;
    let rows = formula_table(alpha, d, dim_t, drift.holder_beta)?;
    let artifacts = RunArtifacts {
        formula_rows: rows,
        ..Default::default()
    };
    let replicas = vec![ReplicaOutcome {
        replica: 0,
        value: None,
        stderr: None,
        error: None,
    }];
    let mut record = aggregate(config, replicas, None);
    record.success_rate_ok = true;
    Ok((record, artifacts))
}

/// Every closed form applicable to `(alpha, d, dim_T, holder_beta)`.
pub fn formula_table(
    alpha: f64,
    d: usize,
    dim_t: f64,
    holder_beta: Option<f64>,
) -> Result<Vec<FormulaResult>> {
    formulas::self_check().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rows = Vec::new();
    let phi = formulas::constant_drift_phi(alpha, dim_t)?;
    let phi_v = phi.value.point();
    rows.push(phi);
    rows.push(formulas::process_graph_phi(alpha, dim_t)?);
    rows.push(formulas::process_range_dim(alpha, d, dim_t)?);
    rows.push(formulas::graph_dim_with_drift(alpha, d, phi_v)?);
    rows.push(formulas::range_dim_with_drift(alpha, d, phi_v)?);
    rows.push(formulas::apriori_dim_bounds(alpha, d, phi_v)?);
    if alpha <= 1.0 {
        rows.push(formulas::improvement_bound(alpha, d, phi_v)?);
    }
    if alpha >= 1.0 {
        rows.push(formulas::fbm_graph_phi(1.0 / alpha, dim_t)?);
    }
    if let Some(beta) = holder_beta {
        rows.push(formulas::holder_phi_upper(alpha, d, dim_t, beta)?);
        let (graph, range) = formulas::brownian_holder_bounds(d, dim_t, beta)?;
        rows.push(graph);
        rows.push(range);
    }
    Ok(rows)
}

// --- CSV output -----------------------------------------------------------

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content.as_bytes())?;
    Ok(())
}

fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    record: &RunRecord,
    artifacts: &RunArtifacts,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_file(&dir.join("replicas.csv"), &replicas_csv(record))?;
    write_file(&dir.join("summary.csv"), &summary_csv(record))?;
    if let Some(ledger) = &artifacts.ledger {
        write_file(&dir.join("ledger.csv"), &ledger_csv(ledger))?;
    }
    if let Some(est) = &artifacts.estimate {
        write_file(&dir.join("estimate.csv"), &estimate_csv(est))?;
    }
    if !artifacts.kernel_rows.is_empty() {
        write_file(&dir.join("kernel.csv"), &kernel_csv(&artifacts.kernel_rows))?;
    }
    if let Some(threshold) = &artifacts.threshold {
        write_file(&dir.join("energy.csv"), &energy_csv(threshold))?;
        write_file(&dir.join("threshold.csv"), &threshold_csv(threshold))?;
    }
    if !artifacts.hit_rows.is_empty() {
        write_file(
            &dir.join("hitcount.csv"),
            &hitcount_csv(&artifacts.hit_rows),
        )?;
    }
    if !artifacts.formula_rows.is_empty() {
        write_file(
            &dir.join("formulas.csv"),
            &formulas_csv(&artifacts.formula_rows),
        )?;
    }
    write_file(&dir.join("config.txt"), config.canonical())?;
    Ok(())
}

pub fn replicas_csv(record: &RunRecord) -> String {
    let mut out = String::from("config_hash,replica,value,stderr,status\n");
    for r in &record.replicas {
        let _ = writeln!(
            out,
            "{:016x},{},{},{},{}",
            record.config_hash,
            r.replica,
            r.value.map(fmt_f64).unwrap_or_default(),
            r.stderr.map(fmt_f64).unwrap_or_default(),
            match &r.error {
                None => "ok".to_string(),
                Some(e) => format!("failed: {}", e.replace(',', ";")),
            }
        );
    }
    out
}

pub fn summary_csv(record: &RunRecord) -> String {
    let mut out = String::from(
        "config_hash,kind,replicas,ok,mean,stderr,oracle_lo,oracle_hi,theorem,tolerance,verdict\n",
    );
    let ok = record.replicas.iter().filter(|r| r.value.is_some()).count();
    let (lo, hi, theorem) = match &record.oracle {
        Some(o) => {
            let (lo, hi) = o.value.bounds();
            (fmt_f64(lo), fmt_f64(hi), o.theorem)
        }
        None => (String::new(), String::new(), ""),
    };
    let verdict = match record.passed {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "n/a",
    };
    let _ = writeln!(
        out,
        "{:016x},{},{},{},{},{},{},{},{},{},{}",
        record.config_hash,
        record.kind.as_str(),
        record.replicas.len(),
        ok,
        record.mean.map(fmt_f64).unwrap_or_default(),
        record.stderr.map(fmt_f64).unwrap_or_default(),
        lo,
        hi,
        theorem,
        fmt_f64(record.tolerance),
        verdict
    );
    out
}

pub fn ledger_csv(ledger: &ScalingLedger) -> String {
    let mut out = String::from("alpha,k,time_side,space_side,N_k\n");
    for (i, &k) in ledger.levels.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(ledger.alpha),
            k,
            fmt_f64(ledger.time_side(k)),
            fmt_f64(ledger.space_side(k)),
            ledger.counts[i]
        );
    }
    out
}

pub fn estimate_csv(est: &DimEstimate) -> String {
    format!(
        "value,stderr,window,convention\n{},{},{}..{},{}\n",
        fmt_f64(est.value),
        fmt_f64(est.stderr),
        est.window.0,
        est.window.1,
        est.convention.as_str()
    )
}

pub fn kernel_csv(rows: &[KernelSweepRow]) -> String {
    let mut out = String::from("alpha,d,beta,tau,delta_norm,estimate,stderr,clip_rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.alpha),
            r.d,
            fmt_f64(r.beta),
            fmt_f64(r.tau),
            fmt_f64(r.delta_norm),
            fmt_f64(r.estimate),
            fmt_f64(r.stderr),
            fmt_f64(r.clip_rate)
        );
    }
    out
}

pub fn energy_csv(threshold: &ThresholdReport) -> String {
    let mut out = String::from("beta,level,partial_sum,verdict\n");
    for report in &threshold.grid {
        for (i, &level) in report.levels.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(report.beta),
                level,
                fmt_f64(report.partial_sums[i]),
                report.verdict.as_str()
            );
        }
    }
    out
}

pub fn threshold_csv(threshold: &ThresholdReport) -> String {
    format!(
        "beta_star,bracket_lo,bracket_hi\n{},{},{}\n",
        fmt_f64(threshold.beta_star),
        fmt_f64(threshold.bracket.0),
        fmt_f64(threshold.bracket.1)
    )
}

pub fn hitcount_csv(rows: &[(u32, f64, usize)]) -> String {
    let mut out = String::from("k,mean_hits,windows\n");
    for &(k, mean, windows) in rows {
        let _ = writeln!(out, "{},{},{}", k, fmt_f64(mean), windows);
    }
    out
}

pub fn formulas_csv(rows: &[FormulaResult]) -> String {
    let mut out = String::from("theorem,assumptions,lo,hi\n");
    for r in rows {
        let (lo, hi) = r.value.bounds();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.theorem,
            r.assumptions.replace(',', ";"),
            fmt_f64(lo),
            fmt_f64(hi)
        );
    }
    out
}

/// Render formula rows as an aligned text table.
pub fn formulas_table_text(rows: &[FormulaResult]) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|r| r.theorem.len()).max().unwrap_or(10);
    for r in rows {
        let (lo, hi) = r.value.bounds();
        let value = if lo == hi {
            fmt_f64(lo)
        } else {
            format!("[{}, {}]", fmt_f64(lo), fmt_f64(hi))
        };
        let _ = writeln!(out, "{:width$}  {:24}  {}", r.theorem, value, r.assumptions);
    }
    out
}
