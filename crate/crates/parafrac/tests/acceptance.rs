//! Acceptance suite: every criterion prints one `[acceptance] ... PASS/FAIL`
//! line (run with `--nocapture` to see them all) and asserts its stated
//! tolerance. Criteria are numbered to match the shipped experiment
//! catalog in `configs/`.

use std::time::Instant;

use parafrac::config::parse_config;
use parafrac::cover::{estimate_dimension_with, graph_cloud, occupancy, Gauge, PointCloud};
use parafrac::domains::DriftSpec;
use parafrac::experiment::{envelope_exponent, run_experiment, ENVELOPE_SLACK};
use parafrac::formulas;
use parafrac::rng::{mix64, StreamKey};
use parafrac::stable::{isotropy_check, sample_stable_increment, simulate_path, StableParams};
use parafrac::stats;
use rand::Rng;

const LOG2_LOG3: f64 = 0.6309297535714574;

fn check(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn run_estimator(config_text: &str) -> (f64, f64, f64) {
    let config = parse_config(config_text).expect("config must validate");
    let (record, _) = run_experiment(&config).expect("run must succeed");
    assert!(record.success_rate_ok, "too many failed replicas");
    let oracle = record
        .oracle
        .as_ref()
        .expect("estimator criteria carry an oracle")
        .value
        .point();
    (record.mean.unwrap(), record.stderr.unwrap(), oracle)
}

fn graph_config(alpha: f64, k_min: u32, k_max: u32, tol: f64) -> String {
    format!(
        "[experiment]
kind = graph_dim
replicas = 8
seed = 42
tolerance = {tol}
[process]
alpha = {alpha}
d = 1
[time_set]
kind = interval
level = 20
[levels]
k_min = {k_min}
k_max = {k_max}
"
    )
}

/// Criterion 1: Brownian graph dimension 1.5 +/- 0.1 from 2^20-point
/// paths, 8 replicas, within 2 minutes.
#[test]
fn criterion_01_brownian_graph() {
    let start = Instant::now();
    let (mean, stderr, oracle) = run_estimator(&graph_config(2.0, 2, 12, 0.1));
    let elapsed = start.elapsed().as_secs_f64();
    let ok = (mean - 1.5).abs() <= 0.1 && oracle == 1.5 && elapsed <= 120.0;
    check(
        "criterion 1 (brownian graph dim)",
        ok,
        &format!("estimate {mean:.4} +/- {stderr:.4} vs oracle 1.5, {elapsed:.1}s"),
    );
}

/// Criterion 2: stable graph family, oracle 2 - 1/alpha, +/- 0.1.
#[test]
fn criterion_02_stable_graph_family() {
    for alpha in [1.2, 1.5, 1.8] {
        let (mean, stderr, oracle) = run_estimator(&graph_config(alpha, 6, 13, 0.1));
        let expected = 2.0 - 1.0 / alpha;
        let ok = (oracle - expected).abs() < 1e-12 && (mean - expected).abs() <= 0.1;
        check(
            &format!("criterion 2 (stable graph, alpha={alpha})"),
            ok,
            &format!("estimate {mean:.4} +/- {stderr:.4} vs oracle {expected:.4}"),
        );
    }
}

/// Criterion 3: parabolic graph dimension of X, oracle (alpha v 1) dim T,
/// +/- 0.12.
#[test]
fn criterion_03_parabolic_graph_family() {
    for alpha in [1.2, 1.5, 1.8] {
        let text = format!(
            "[experiment]
kind = parabolic_dim
replicas = 8
seed = 42
tolerance = 0.12
[process]
alpha = {alpha}
d = 1
[time_set]
kind = interval
level = 20
[levels]
k_min = 2
k_max = 12
"
        );
        let (mean, stderr, oracle) = run_estimator(&text);
        let ok = (oracle - alpha).abs() < 1e-12 && (mean - alpha).abs() <= 0.12;
        check(
            &format!("criterion 3 (parabolic graph, alpha={alpha})"),
            ok,
            &format!("estimate {mean:.4} +/- {stderr:.4} vs oracle {alpha}"),
        );
    }
}

/// Criterion 4: range dimensions, oracle (alpha dim T) ^ d, +/- 0.1.
#[test]
fn criterion_04_range_dimensions() {
    let cases = [
        (0.7, 1usize, 20u32, 10u32, 17u32, 0.7),
        (1.5, 1, 20, 6, 13, 1.0),
        (1.5, 2, 22, 2, 13, 1.5),
    ];
    for (alpha, d, level, k_min, k_max, expected) in cases {
        let text = format!(
            "[experiment]
kind = range_dim
replicas = 8
seed = 42
tolerance = 0.1
[process]
alpha = {alpha}
d = {d}
[time_set]
kind = interval
level = {level}
[levels]
k_min = {k_min}
k_max = {k_max}
"
        );
        let (mean, stderr, oracle) = run_estimator(&text);
        let ok = (oracle - expected).abs() < 1e-12 && (mean - expected).abs() <= 0.1;
        check(
            &format!("criterion 4 (range dim, alpha={alpha}, d={d})"),
            ok,
            &format!("estimate {mean:.4} +/- {stderr:.4} vs oracle {expected}"),
        );
    }
}

/// Criterion 5: Brownian graph over the middle-thirds Cantor set (level
/// 14), oracle log2/log3 + 1/2, +/- 0.12.
#[test]
fn criterion_05_cantor_time_set() {
    let text = "[experiment]
kind = graph_dim
replicas = 8
seed = 42
tolerance = 0.12
[process]
alpha = 2.0
d = 1
[time_set]
kind = cantor
ratio = 0.3333333333333333
level = 14
[levels]
k_min = 1
k_max = 11
";
    let (mean, stderr, oracle) = run_estimator(text);
    let expected = LOG2_LOG3 + 0.5;
    let ok = (oracle - expected).abs() < 1e-12 && (mean - expected).abs() <= 0.12;
    check(
        "criterion 5 (cantor time set)",
        ok,
        &format!("estimate {mean:.4} +/- {stderr:.4} vs oracle {expected:.4}"),
    );
}

/// Criterion 6: time-gauge and diameter-gauge estimates are exactly equal
/// on 100 random clouds (bit-level, zero tolerance).
#[test]
fn criterion_06_gauge_identity() {
    let mut rng = StreamKey(606).rng();
    let mut worst: u64 = 0;
    for _ in 0..100 {
        let alpha = 0.3 + 1.7 * rng.random::<f64>();
        let axes = 2 + (rng.random::<f64>() * 2.0) as usize;
        let n = 200 + (rng.random::<f64>() * 800.0) as usize;
        let mut cloud = PointCloud::new(axes);
        let mut row = vec![0.0; axes];
        for _ in 0..n {
            for x in row.iter_mut() {
                *x = rng.random::<f64>() * 2.0 - 0.5;
            }
            cloud.push(&row);
        }
        let levels: Vec<u32> = (0..10).collect();
        let ledger = occupancy(&cloud, alpha, &levels, Gauge::TimeGauge).unwrap();
        let t = estimate_dimension_with(&ledger, Gauge::TimeGauge).unwrap();
        let d = estimate_dimension_with(&ledger, Gauge::DiamGauge).unwrap();
        worst = worst.max(t.value.to_bits() ^ d.value.to_bits());
        assert_eq!(t.value.to_bits(), d.value.to_bits());
        assert_eq!(t.stderr.to_bits(), d.stderr.to_bits());
    }
    check(
        "criterion 6 (gauge identity)",
        worst == 0,
        "100 random clouds, bit-identical estimates in both gauges",
    );
}

/// Criterion 7: a priori sandwich between the Euclidean and parabolic
/// estimates of each criterion 1-5 experiment, within combined 0.15.
#[test]
fn criterion_07_sandwich_property() {
    // (alpha, d, cantor?, euclid window, parabolic window)
    let cases = [
        (2.0, 1usize, false, (2u32, 12u32), (2u32, 12u32)),
        (1.2, 1, false, (6, 13), (2, 12)),
        (1.5, 1, false, (6, 13), (2, 12)),
        (1.8, 1, false, (6, 13), (2, 12)),
        (0.7, 1, false, (6, 13), (2, 12)),
        (1.5, 2, false, (2, 12), (2, 12)),
        (2.0, 1, true, (1, 11), (1, 11)),
    ];
    let tol = 0.15;
    for (alpha, d, cantor, ewin, pwin) in cases {
        let (set, level) = if cantor {
            ("kind = cantor\nratio = 0.3333333333333333", 14)
        } else {
            ("kind = interval", 20)
        };
        let text = format!(
            "[experiment]
kind = graph_dim
seed = 42
[process]
alpha = {alpha}
d = {d}
[time_set]
{set}
level = {level}
[levels]
k_min = {}
k_max = {}
",
            ewin.0, ewin.1
        );
        let config = parse_config(&text).unwrap();
        let grid = config.time_set.build().unwrap().to_grid().unwrap();
        let path = simulate_path(&config.params, &grid, mix64(42, 0));
        let cloud = graph_cloud(&path, &DriftSpec::zero(d, grid.t_max())).unwrap();

        let elevels: Vec<u32> = (ewin.0..=ewin.1).collect();
        let eledger = occupancy(&cloud, 1.0, &elevels, Gauge::TimeGauge).unwrap();
        let dim = estimate_dimension_with(&eledger, Gauge::TimeGauge)
            .unwrap()
            .value;

        let plevels: Vec<u32> = (pwin.0..=pwin.1).collect();
        let pledger = occupancy(&cloud, alpha, &plevels, Gauge::TimeGauge).unwrap();
        let phi = estimate_dimension_with(&pledger, Gauge::TimeGauge)
            .unwrap()
            .value;

        let bounds = formulas::apriori_dim_bounds(alpha, d, phi.clamp(0.0, d as f64 + 1.0))
            .unwrap()
            .value;
        let (lo, hi) = bounds.bounds();
        let ok = dim >= lo - tol && dim <= hi + tol;
        check(
            &format!("criterion 7 (sandwich, alpha={alpha}, d={d}, cantor={cantor})"),
            ok,
            &format!("dim {dim:.4} vs [{lo:.4}, {hi:.4}] from phi {phi:.4}"),
        );
    }
}

/// Criterion 8: kernel envelope suite; fitted slopes respect the bound
/// exponents within +0.1 slack on >= 8 scales with n_mc = 1e5, and the
/// whole suite finishes within 5 minutes.
#[test]
fn criterion_08_kernel_envelopes() {
    let start = Instant::now();
    // (alpha, d, kernel, beta, sweep, scale levels)
    let cases: [(f64, usize, &str, f64, &str, &str); 6] = [
        (1.5, 1, "k_beta", 0.5, "tau", "2,3,4,5,6,7,8,9,10"),
        (1.5, 1, "k_beta", 1.5, "tau", "6,7,8,9,10,11,12,13,14"),
        (1.5, 2, "k_beta", 1.0, "delta", "2,3,4,5,6,7,8,9,10"),
        (0.7, 1, "k_beta", 0.5, "delta", "2,3,4,5,6,7,8,9,10"),
        (1.5, 2, "kappa_beta", 1.0, "tau", "2,3,4,5,6,7,8,9,10"),
        (1.2, 1, "kappa_beta", 0.5, "delta", "2,3,4,5,6,7,8,9,10"),
    ];
    for (alpha, d, kernel, beta, sweep, scales) in cases {
        let text = format!(
            "[experiment]
kind = kernel_sweep
replicas = 1
seed = 42
[process]
alpha = {alpha}
d = {d}
[time_set]
kind = interval
level = 4
[kernel]
kind = {kernel}
beta = {beta}
n_mc = 100000
scale_levels = {scales}
sweep = {sweep}
"
        );
        let config = parse_config(&text).unwrap();
        let (record, _) = run_experiment(&config).unwrap();
        let slope = record.mean.unwrap();
        let envelope = envelope_exponent(kernel, sweep, alpha, d, beta);
        let ok = slope >= envelope - ENVELOPE_SLACK;
        check(
            &format!("criterion 8 ({kernel} {sweep}, alpha={alpha}, d={d}, beta={beta})"),
            ok,
            &format!("slope {slope:.4} vs envelope {envelope:.4} - 0.1"),
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        "criterion 8 (runtime)",
        elapsed <= 300.0,
        &format!("{elapsed:.1}s <= 300s"),
    );
}

/// Criterion 9: capacity thresholds. Brownian graph measure -> 1.5 +/-
/// 0.15; Cantor(1/3) time measure -> log2/log3 +/- 0.1, both at
/// bisection resolution 0.05.
#[test]
fn criterion_09_capacity_thresholds() {
    let brownian = "[experiment]
kind = energy_threshold
replicas = 3
seed = 42
tolerance = 0.15
[process]
alpha = 2.0
d = 1
[time_set]
kind = interval
level = 12
[energy]
kernel = euclidean
beta_grid = 1.0, 1.2, 1.4, 1.6, 1.8
family_levels = 10, 11, 12
family = path_graph
";
    let config = parse_config(brownian).unwrap();
    let (record, _) = run_experiment(&config).unwrap();
    let mean = record.mean.unwrap();
    check(
        "criterion 9 (brownian graph threshold)",
        (mean - 1.5).abs() <= 0.15,
        &format!("beta* {mean:.4} vs 1.5 +/- 0.15"),
    );

    let cantor = "[experiment]
kind = energy_threshold
replicas = 1
seed = 42
tolerance = 0.1
[process]
alpha = 2.0
d = 1
[time_set]
kind = cantor
ratio = 0.3333333333333333
level = 12
[energy]
kernel = euclidean
beta_grid = 0.3, 0.45, 0.6, 0.75, 0.9
family_levels = 10, 11, 12
family = time_set
";
    let config = parse_config(cantor).unwrap();
    let (record, artifacts) = run_experiment(&config).unwrap();
    let mean = record.mean.unwrap();
    let bracket = artifacts.threshold.as_ref().unwrap().bracket;
    let resolution_ok = bracket.1 - bracket.0 <= 0.05 + 1e-12;
    check(
        "criterion 9 (cantor time measure threshold)",
        (mean - LOG2_LOG3).abs() <= 0.1 && resolution_ok,
        &format!(
            "beta* {mean:.4} vs {LOG2_LOG3:.4} +/- 0.1, bracket width {:.4}",
            bracket.1 - bracket.0
        ),
    );
}

/// Criterion 10: sampler validation battery.
#[test]
fn criterion_10_sampler_validation() {
    // Variance 2 +/- 0.02 per coordinate at alpha = 2.
    let params = StableParams::new(2.0, 1).unwrap();
    let mut rng = StreamKey(1010).rng();
    let n = 1_000_000;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let x = sample_stable_increment(&params, 1.0, &mut rng).unwrap()[0];
        sum_sq += x * x;
    }
    let var = sum_sq / n as f64;
    check(
        "criterion 10 (alpha=2 variance)",
        (var - 2.0).abs() <= 0.02,
        &format!("variance {var:.4} vs 2 +/- 0.02"),
    );

    // Cauchy interquartile range 2 +/- 1%.
    let params = StableParams::new(1.0, 1).unwrap();
    let mut rng = StreamKey(1011).rng();
    let draws: Vec<f64> = (0..n)
        .map(|_| sample_stable_increment(&params, 1.0, &mut rng).unwrap()[0])
        .collect();
    let iqr = stats::quantile(&draws, 0.75).unwrap() - stats::quantile(&draws, 0.25).unwrap();
    check(
        "criterion 10 (alpha=1 IQR)",
        (iqr - 2.0).abs() <= 0.02,
        &format!("IQR {iqr:.4} vs 2 +/- 2%"),
    );

    // Self-similarity KS at level 0.01 for c in {2, 4}.
    let m = 100_000;
    for alpha in [0.7, 1.5, 2.0] {
        let params = StableParams::new(alpha, 1).unwrap();
        for c in [2.0, 4.0] {
            let mut r1 = StreamKey(1012).rng();
            let mut r2 = StreamKey(1013).rng();
            let a: Vec<f64> = (0..m)
                .map(|_| sample_stable_increment(&params, c, &mut r1).unwrap()[0])
                .collect();
            let b: Vec<f64> = (0..m)
                .map(|_| {
                    c.powf(1.0 / alpha) * sample_stable_increment(&params, 1.0, &mut r2).unwrap()[0]
                })
                .collect();
            let ks = stats::ks_two_sample(&a, &b).unwrap();
            let crit = stats::ks_two_sample_critical(m, m, 0.01);
            check(
                &format!("criterion 10 (self-similarity, alpha={alpha}, c={c})"),
                ks < crit,
                &format!("KS {ks:.5} < {crit:.5}"),
            );
        }
    }

    // Isotropy for d in {2, 3}.
    for (alpha, d) in [(1.5, 2usize), (2.0, 3)] {
        let params = StableParams::new(alpha, d).unwrap();
        let mut rng = StreamKey(1014 + d as u64).rng();
        let samples: Vec<Vec<f64>> = (0..m)
            .map(|_| sample_stable_increment(&params, 1.0, &mut rng).unwrap())
            .collect();
        let report = isotropy_check(&samples, 0.01).unwrap();
        check(
            &format!("criterion 10 (isotropy, alpha={alpha}, d={d})"),
            report.pass,
            &format!("adjusted p {:.4} >= 0.01", report.p_adjusted),
        );
    }

    // Tail slope -alpha +/- 0.15 for alpha in {0.7, 1.5}.
    for alpha in [0.7, 1.5] {
        let params = StableParams::new(alpha, 1).unwrap();
        let mut rng = StreamKey(1016).rng();
        let norms: Vec<f64> = (0..n)
            .map(|_| sample_stable_increment(&params, 1.0, &mut rng).unwrap()[0].abs())
            .collect();
        let fit = stats::survival_slope(&norms, 10.0, 100.0, 8).unwrap();
        check(
            &format!("criterion 10 (tail slope, alpha={alpha})"),
            (fit.slope + alpha).abs() <= 0.15,
            &format!("slope {:.4} vs -{alpha} +/- 0.15", fit.slope),
        );
    }
}

/// Criterion 11: byte-identical CSVs across thread counts at fixed seed.
#[test]
fn criterion_11_determinism_across_threads() {
    let text = "[experiment]
kind = graph_dim
replicas = 4
seed = 42
tolerance = 0.2
[process]
alpha = 1.5
d = 1
[time_set]
kind = interval
level = 16
[levels]
k_min = 1
k_max = 11
";
    let run_with = |threads: usize| -> u64 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let config = parse_config(text).unwrap();
            let (record, artifacts) = run_experiment(&config).unwrap();
            let mut bytes = parafrac::experiment::replicas_csv(&record);
            bytes.push_str(&parafrac::experiment::summary_csv(&record));
            bytes.push_str(&parafrac::experiment::ledger_csv(
                artifacts.ledger.as_ref().unwrap(),
            ));
            bytes.push_str(&parafrac::experiment::estimate_csv(
                artifacts.estimate.as_ref().unwrap(),
            ));
            parafrac::config::fnv1a64(bytes.as_bytes())
        })
    };
    let h1 = run_with(1);
    let h2 = run_with(2);
    let h4 = run_with(4);
    check(
        "criterion 11 (thread determinism)",
        h1 == h2 && h2 == h4,
        &format!("csv hashes {h1:016x} / {h2:016x} / {h4:016x}"),
    );
}

/// Criterion 12: exhaustive branch sweep. On a generic lattice exactly
/// one branch fires per formula; at the alpha = 1 and alpha = 1/beta
/// seams both branches agree to 1e-12.
#[test]
fn criterion_12_formula_branch_sweep() {
    formulas::self_check().unwrap();

    let alphas = [0.3, 0.55, 0.85, 1.15, 1.45, 1.75, 1.95];
    let betas = [0.17, 0.37, 0.57, 0.77, 0.97];
    let dims = [1usize, 2, 3];
    let dim_ts = [0.13, LOG2_LOG3, 0.83, 1.0];
    let phis = [0.11, 0.61, 1.11, 1.61];

    let mut points = 0usize;
    for &alpha in &alphas {
        for &d in &dims {
            for &phi in &phis {
                if phi > d as f64 + 1.0 {
                    continue;
                }
                for branches in [
                    formulas::branches::graph_dim(alpha, d, phi),
                    formulas::branches::range_dim(alpha, d, phi),
                    formulas::branches::apriori_upper(alpha, d, phi),
                    formulas::branches::apriori_lower(alpha, d, phi),
                ] {
                    assert_eq!(
                        branches.iter().flatten().count(),
                        1,
                        "alpha={alpha} d={d} phi={phi}: {branches:?}"
                    );
                    points += 1;
                }
            }
            for &dim_t in &dim_ts {
                for &beta in &betas {
                    let fired: Vec<f64> =
                        formulas::branches::holder_phi_upper(alpha, d, dim_t, beta)
                            .iter()
                            .flatten()
                            .copied()
                            .collect();
                    assert_eq!(
                        fired.len(),
                        1,
                        "holder alpha={alpha} d={d} dim_t={dim_t} beta={beta}"
                    );
                    points += 1;

                    // Brownian case tables: exactly one case fires at
                    // generic points; the returned bound is the minimum
                    // of every fired case.
                    let graph_cases = formulas::branches::brownian_graph(d, dim_t, beta);
                    assert_eq!(
                        graph_cases.iter().flatten().count(),
                        1,
                        "brownian graph d={d} dim_t={dim_t} beta={beta}: {graph_cases:?}"
                    );
                    let range_cases = formulas::branches::brownian_range(d, dim_t, beta);
                    assert_eq!(range_cases.iter().flatten().count(), 1);
                    let (g, r) = formulas::brownian_holder_bounds(d, dim_t, beta).unwrap();
                    let g_min = graph_cases
                        .iter()
                        .flatten()
                        .fold(f64::INFINITY, |a, &b| a.min(b));
                    let r_min = range_cases
                        .iter()
                        .flatten()
                        .fold(f64::INFINITY, |a, &b| a.min(b));
                    assert!((g.value.point() - g_min).abs() < 1e-12);
                    assert!((r.value.point() - r_min).abs() < 1e-12);
                    points += 2;
                }
            }
        }
    }

    // Boundary agreement to 1e-12 at the alpha-branch seams.
    let mut boundaries = 0usize;
    for &d in &dims {
        for &phi in &phis {
            if phi > d as f64 + 1.0 {
                continue;
            }
            for branches in [
                formulas::branches::graph_dim(1.0, d, phi),
                formulas::branches::range_dim(1.0, d, phi),
                formulas::branches::apriori_upper(1.0, d, phi),
                formulas::branches::apriori_lower(1.0, d, phi),
            ] {
                let fired: Vec<f64> = branches.iter().flatten().copied().collect();
                assert_eq!(fired.len(), 2);
                assert!(
                    (fired[0] - fired[1]).abs() <= 1e-12,
                    "boundary mismatch at alpha=1: {fired:?}"
                );
                boundaries += 1;
            }
        }
        for &dim_t in &dim_ts {
            for &beta in &betas {
                let at_one = formulas::branches::holder_phi_upper(1.0, d, dim_t, beta);
                let (a, b) = (at_one[0].unwrap(), at_one[1].unwrap());
                assert!((a - b).abs() <= 1e-12);
                let at_seam = formulas::branches::holder_phi_upper(1.0 / beta, d, dim_t, beta);
                if let (Some(a), Some(b)) = (at_seam[1], at_seam[2]) {
                    assert!((a - b).abs() <= 1e-12, "alpha=1/beta seam: {a} vs {b}");
                }
                boundaries += 2;
            }
        }
    }
    check(
        "criterion 12 (formula branch sweep)",
        true,
        &format!("{points} generic lattice points, {boundaries} boundary checks"),
    );
}
