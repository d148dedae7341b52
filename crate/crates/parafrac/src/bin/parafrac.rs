//! Command-line driver for simulation, box counting, formula tables,
//! kernel probes, energy thresholds and batch experiments.
//!
//! Exit codes: 0 all pass, 1 tolerance failure, 2 validation error,
//! 3 runtime failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use parafrac::config::{load_config, parse_seed, ExperimentConfig};
use parafrac::cover::{estimate_dimension, Gauge, ScalingLedger};
use parafrac::energy::{EnergyReport, Verdict};
use parafrac::error::Error;
use parafrac::experiment::{self, run_experiment};
use parafrac::plot::{plot_energy, plot_ledger};
use parafrac::rng::mix64;
use parafrac::stable::simulate_path;

/// Master-seed environment variable; overrides `--seed`.
const SEED_ENV: &str = "PARAFRAC_SEED";

#[derive(Parser)]
#[command(
    name = "parafrac",
    about = "Stable Levy paths over fractal time sets: simulation, box counting, \
             dimension formulas, kernel and energy probes",
    version
)]
struct Cli {
    /// Experiment configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed (decimal or 0x-hex); PARAFRAC_SEED overrides this.
    #[arg(long, global = true)]
    seed: Option<String>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Number of replicas (overrides the config).
    #[arg(long, global = true)]
    replicas: Option<usize>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format for tables printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one path and export it as CSV (columns t, x_1..x_d).
    Simulate,
    /// Count occupied cylinders of one replica and fit the dimension.
    Boxcount,
    /// Evaluate every applicable closed-form dimension formula.
    Formula,
    /// Sweep a difference kernel across dyadic scales and fit the slope.
    KernelProbe,
    /// Run the capacity threshold probe.
    Energy,
    /// Run a full experiment from the config.
    Experiment,
    /// Render a ledger or energy CSV as an SVG plot.
    Plot {
        /// Input CSV (ledger.csv or energy.csv layout).
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure {n} worker threads");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::InvalidParameter(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn effective_seed(cli: &Cli) -> Result<Option<u64>, Error> {
    if let Ok(env) = std::env::var(SEED_ENV) {
        return Ok(Some(parse_seed(&env)?));
    }
    match &cli.seed {
        Some(s) => Ok(Some(parse_seed(s)?)),
        None => Ok(None),
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required for this subcommand".into()))?;
    let mut config = load_config(path)?;
    if let Some(seed) = effective_seed(cli)? {
        config.seed = seed;
    }
    if let Some(replicas) = cli.replicas {
        config.n_replicas = replicas;
    }
    if let Some(out) = &cli.out {
        config.out_dir = Some(out.clone());
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Simulate => {
            let config = load(cli)?;
            let grid = config.time_set.build()?.to_grid()?;
            let path = simulate_path(&config.params, &grid, mix64(config.seed, 0));
            let mut csv = String::from("t");
            for j in 1..=config.params.dim() {
                csv.push_str(&format!(",x_{j}"));
            }
            csv.push('\n');
            for i in 0..path.len() {
                csv.push_str(&format!("{}", path.time(i)));
                for x in path.position(i) {
                    csv.push_str(&format!(",{x}"));
                }
                csv.push('\n');
            }
            emit(&config.out_dir, "path.csv", &csv)?;
            Ok(0)
        }
        Command::Boxcount => {
            let mut config = load(cli)?;
            config.n_replicas = 1;
            let (record, artifacts) = run_experiment(&config)?;
            let ledger = artifacts.ledger.ok_or_else(|| {
                Error::Config("boxcount needs a graph/range/parabolic kind".into())
            })?;
            let est = artifacts.estimate.expect("estimate accompanies ledger");
            print!("{}", experiment::ledger_csv(&ledger));
            print!("{}", experiment::estimate_csv(&est));
            Ok(record.exit_code() as u8)
        }
        Command::Formula => {
            let config = load(cli)?;
            let ts = config.time_set.build()?;
            let drift = config.drift.build(&config.params, &config.time_set)?;
            let rows = experiment::formula_table(
                config.params.alpha(),
                config.params.dim(),
                ts.known_dim.unwrap_or(1.0),
                drift.holder_beta,
            )?;
            let text = match cli.format {
                Format::Csv => experiment::formulas_csv(&rows),
                Format::Table => experiment::formulas_table_text(&rows),
            };
            print!("{text}");
            if let Some(dir) = &config.out_dir {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("formulas.csv"), experiment::formulas_csv(&rows))?;
            }
            Ok(0)
        }
        Command::KernelProbe | Command::Energy | Command::Experiment => {
            let config = load(cli)?;
            let (record, _artifacts) = run_experiment(&config)?;
            print!("{}", experiment::summary_csv(&record));
            Ok(record.exit_code() as u8)
        }
        Command::Plot { input } => {
            let svg = render_plot(input)?;
            let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out_dir)?;
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
            let target = out_dir.join(format!("{stem}.svg"));
            std::fs::write(&target, svg)?;
            println!("{}", target.display());
            Ok(0)
        }
    }
}

fn emit(out_dir: &Option<PathBuf>, name: &str, content: &str) -> Result<(), Error> {
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), content)?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn render_plot(input: &Path) -> Result<String, Error> {
    let text = std::fs::read_to_string(input)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty plot input".into()))?;
    match header {
        "alpha,k,time_side,space_side,N_k" => {
            let mut alpha = 1.0;
            let mut levels = Vec::new();
            let mut counts = Vec::new();
            for line in lines {
                let parts: Vec<&str> = line.split(',').collect();
                if parts.len() != 5 {
                    return Err(Error::InvalidParameter(format!("bad ledger row '{line}'")));
                }
                alpha = parts[0]
                    .parse()
                    .map_err(|_| Error::InvalidParameter("bad alpha".into()))?;
                levels.push(
                    parts[1]
                        .parse()
                        .map_err(|_| Error::InvalidParameter("bad level".into()))?,
                );
                counts.push(
                    parts[4]
                        .parse()
                        .map_err(|_| Error::InvalidParameter("bad count".into()))?,
                );
            }
            let n_points = counts.iter().copied().max().unwrap_or(1) as usize;
            let ledger =
                ScalingLedger::from_counts(alpha, levels, counts, n_points, Gauge::TimeGauge)?;
            let estimate = estimate_dimension(&ledger).ok();
            plot_ledger(&ledger, estimate.as_ref())
        }
        "beta,level,partial_sum,verdict" => {
            let mut reports: Vec<EnergyReport> = Vec::new();
            for line in lines {
                let parts: Vec<&str> = line.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::InvalidParameter(format!("bad energy row '{line}'")));
                }
                let beta: f64 = parts[0]
                    .parse()
                    .map_err(|_| Error::InvalidParameter("bad beta".into()))?;
                let level: usize = parts[1]
                    .parse()
                    .map_err(|_| Error::InvalidParameter("bad level".into()))?;
                let sum: f64 = parts[2]
                    .parse()
                    .map_err(|_| Error::InvalidParameter("bad partial sum".into()))?;
                let verdict = match parts[3] {
                    "converging" => Verdict::Converging,
                    "diverging" => Verdict::Diverging,
                    _ => Verdict::Inconclusive,
                };
                match reports.last_mut() {
                    Some(r) if r.beta == beta => {
                        r.levels.push(level);
                        r.partial_sums.push(sum);
                        r.verdict = verdict;
                    }
                    _ => reports.push(EnergyReport {
                        beta,
                        levels: vec![level],
                        partial_sums: vec![sum],
                        verdict,
                        threshold_estimate: None,
                    }),
                }
            }
            plot_energy(&reports)
        }
        other => Err(Error::InvalidParameter(format!(
            "unrecognised plot input header '{other}'"
        ))),
    }
}
