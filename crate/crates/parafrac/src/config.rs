//! Experiment configuration: a flat `key = value` format with
//! `[section]` headers, chosen for zero-dependency parsing and
//! diff-friendliness. Unknown sections or keys are hard errors, so typos
//! cannot silently change an experiment. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::domains::{DriftKind, DriftSpec, TimeSet, TimeSetKind};
use crate::energy::KernelSpec;
use crate::error::{Error, Result};
use crate::stable::{simulate_path, StableParams};

/// What an experiment run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    GraphDim,
    RangeDim,
    ParabolicDim,
    KernelSweep,
    EnergyThreshold,
    FormulaTable,
    HitCount,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::GraphDim => "graph_dim",
            ExperimentKind::RangeDim => "range_dim",
            ExperimentKind::ParabolicDim => "parabolic_dim",
            ExperimentKind::KernelSweep => "kernel_sweep",
            ExperimentKind::EnergyThreshold => "energy_threshold",
            ExperimentKind::FormulaTable => "formula_table",
            ExperimentKind::HitCount => "hitcount",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "graph_dim" => ExperimentKind::GraphDim,
            "range_dim" => ExperimentKind::RangeDim,
            "parabolic_dim" => ExperimentKind::ParabolicDim,
            "kernel_sweep" => ExperimentKind::KernelSweep,
            "energy_threshold" => ExperimentKind::EnergyThreshold,
            "formula_table" => ExperimentKind::FormulaTable,
            "hitcount" => ExperimentKind::HitCount,
            other => return Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        })
    }
}

/// Time-set description prior to construction.
#[derive(Debug, Clone)]
pub struct TimeSetConfig {
    pub kind: TimeSetKind,
    pub level: u32,
    pub t_max: f64,
}

impl TimeSetConfig {
    pub fn build(&self) -> Result<TimeSet> {
        crate::domains::build_time_set(self.kind, self.level, self.t_max)
    }
}

/// Drift description prior to construction.
#[derive(Debug, Clone)]
pub enum DriftConfig {
    Zero,
    Constant(Vec<f64>),
    Power { beta: f64 },
    Weierstrass { base: f64, beta: f64 },
    SampledPath { seed: u64 },
}

impl DriftConfig {
    pub fn build(&self, params: &StableParams, ts: &TimeSetConfig) -> Result<DriftSpec> {
        let d = params.dim();
        let kind = match self {
            DriftConfig::Zero => DriftKind::Zero,
            DriftConfig::Constant(v) => {
                if v.len() == 1 && d > 1 {
                    DriftKind::Constant(vec![v[0]; d])
                } else {
                    DriftKind::Constant(v.clone())
                }
            }
            DriftConfig::Power { beta } => DriftKind::Power { beta: *beta },
            DriftConfig::Weierstrass { base, beta } => DriftKind::Weierstrass {
                base: *base,
                beta: *beta,
            },
            DriftConfig::SampledPath { seed } => {
                let grid = ts.build()?.to_grid()?;
                DriftKind::SampledPath(simulate_path(params, &grid, *seed))
            }
        };
        DriftSpec::new(kind, d, ts.t_max)
    }
}

/// Kernel sweep settings.
#[derive(Debug, Clone)]
pub struct KernelConfig {
    /// `k_beta` or `kappa_beta`.
    pub kind: String,
    pub beta: f64,
    pub n_mc: usize,
    /// Dyadic scale exponents j; the swept variable runs over 2^-j.
    pub scale_levels: Vec<u32>,
    /// `tau` or `delta`.
    pub sweep: String,
}

/// Energy / capacity probe settings.
#[derive(Debug, Clone)]
pub struct EnergyConfig {
    pub kernel: String,
    pub n_mc: usize,
    pub beta_grid: Vec<f64>,
    pub family_levels: Vec<u32>,
    /// `time_set` or `path_graph`.
    pub family: String,
}

impl EnergyConfig {
    pub fn kernel_spec(&self, alpha: f64) -> Result<KernelSpec> {
        Ok(match self.kernel.as_str() {
            "euclidean" => KernelSpec::Euclidean,
            "k_beta" => KernelSpec::KBeta {
                alpha,
                n_mc: self.n_mc,
            },
            "kappa_beta" => KernelSpec::KappaBeta {
                alpha,
                n_mc: self.n_mc,
            },
            other => return Err(Error::Config(format!("unknown energy kernel '{other}'"))),
        })
    }
}

/// A fully parsed and validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub params: StableParams,
    pub time_set: TimeSetConfig,
    pub drift: DriftConfig,
    pub k_min: u32,
    pub k_max: u32,
    pub n_points: Option<usize>,
    pub n_replicas: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub out_dir: Option<PathBuf>,
    pub kernel: Option<KernelConfig>,
    pub energy: Option<EnergyConfig>,
    pub hit_levels: Vec<u32>,
    canonical: String,
}

impl ExperimentConfig {
    /// FNV-1a hash of the canonical `section.key=value` listing; recorded
    /// in every output row so results are self-describing.
    pub fn hash(&self) -> u64 {
        fnv1a64(self.canonical.as_bytes())
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// Counting levels `k_min..=k_max`.
    pub fn levels(&self) -> Vec<u32> {
        (self.k_min..=self.k_max).collect()
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Parse a seed as decimal or 0x-prefixed hex.
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse::<u64>()
    };
    parsed.map_err(|_| Error::Config(format!("seed '{s}' is not a 64-bit unsigned integer")))
}

struct RawConfig {
    /// `(section, key) -> value`, plus consumption tracking for the
    /// unknown-key check.
    entries: BTreeMap<(String, String), (String, bool)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(i) => &raw_line[..i],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    Error::Config(format!("line {}: malformed section header", lineno + 1))
                })?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if section.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: key '{key}' appears before any [section]",
                    lineno + 1
                )));
            }
            if entries
                .insert((section.clone(), key.clone()), (value, false))
                .is_some()
            {
                return Err(Error::Config(format!(
                    "duplicate key '{key}' in section [{section}]"
                )));
            }
        }
        Ok(RawConfig { entries })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.entries
            .get_mut(&(section.to_string(), key.to_string()))
            .map(|(v, used)| {
                *used = true;
                v.clone()
            })
    }

    fn require(&mut self, section: &str, key: &str) -> Result<String> {
        self.take(section, key).ok_or_else(|| {
            Error::Config(format!(
                "missing required key '{key}' in section [{section}]"
            ))
        })
    }

    fn finish_or_report_unknown(&self) -> Result<()> {
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(_, (_, used))| !used)
            .map(|((s, k), _)| format!("[{s}] {k}"))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown configuration keys: {}",
                unknown.join(", ")
            )))
        }
    }

    fn canonical(&self) -> String {
        let mut out = String::new();
        for ((s, k), (v, _)) in &self.entries {
            out.push_str(s);
            out.push('.');
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

fn parse_f64(section: &str, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Config(format!("[{section}] {key} = '{v}' is not a number")))
}

fn parse_usize(section: &str, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::Config(format!("[{section}] {key} = '{v}' is not a count")))
}

fn parse_u32_list(section: &str, key: &str, v: &str) -> Result<Vec<u32>> {
    v.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("[{section}] {key}: '{p}' is not an integer")))
        })
        .collect()
}

fn parse_f64_list(section: &str, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|p| parse_f64(section, key, p.trim()))
        .collect()
}

/// Parse and validate a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Parse and validate configuration text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut raw = RawConfig::parse(text)?;
    let canonical = raw.canonical();

    let kind = ExperimentKind::parse(&raw.require("experiment", "kind")?)?;
    let n_replicas = match raw.take("experiment", "replicas") {
        Some(v) => parse_usize("experiment", "replicas", &v)?,
        None => 1,
    };
    if n_replicas == 0 {
        return Err(Error::Config("replicas must be >= 1".into()));
    }
    let seed = match raw.take("experiment", "seed") {
        Some(v) => parse_seed(&v)?,
        None => 0,
    };
    let tolerance = match raw.take("experiment", "tolerance") {
        Some(v) => parse_f64("experiment", "tolerance", &v)?,
        None => 0.1,
    };
    if tolerance <= 0.0 || tolerance.is_nan() {
        return Err(Error::Config("tolerance must be > 0".into()));
    }
    let out_dir = raw.take("experiment", "out").map(PathBuf::from);
    let n_points = match raw.take("experiment", "n_points") {
        Some(v) => Some(parse_usize("experiment", "n_points", &v)?),
        None => None,
    };

    let alpha = parse_f64("process", "alpha", &raw.require("process", "alpha")?)?;
    let d = parse_usize("process", "d", &raw.require("process", "d")?)?;
    let params = StableParams::new(alpha, d).map_err(|e| Error::Config(e.to_string()))?;

    let ts_kind = raw.require("time_set", "kind")?;
    let level = raw
        .require("time_set", "level")?
        .parse::<u32>()
        .map_err(|_| Error::Config("time_set level must be an integer".into()))?;
    let t_max = match raw.take("time_set", "t_max") {
        Some(v) => parse_f64("time_set", "t_max", &v)?,
        None => 1.0,
    };
    let time_set = match ts_kind.as_str() {
        "interval" => TimeSetConfig {
            kind: TimeSetKind::Interval,
            level,
            t_max,
        },
        "cantor" => {
            let ratio = parse_f64("time_set", "ratio", &raw.require("time_set", "ratio")?)?;
            TimeSetConfig {
                kind: TimeSetKind::Cantor { ratio },
                level,
                t_max,
            }
        }
        other => return Err(Error::Config(format!("unknown time_set kind '{other}'"))),
    };

    let drift = match raw.take("drift", "kind").as_deref() {
        None | Some("zero") => DriftConfig::Zero,
        Some("constant") => {
            let v = raw.require("drift", "value")?;
            DriftConfig::Constant(parse_f64_list("drift", "value", &v)?)
        }
        Some("power") => DriftConfig::Power {
            beta: parse_f64("drift", "beta", &raw.require("drift", "beta")?)?,
        },
        Some("weierstrass") => DriftConfig::Weierstrass {
            base: parse_f64("drift", "base", &raw.require("drift", "base")?)?,
            beta: parse_f64("drift", "beta", &raw.require("drift", "beta")?)?,
        },
        Some("sampled_path") => DriftConfig::SampledPath {
            seed: parse_seed(&raw.require("drift", "seed")?)?,
        },
        Some(other) => return Err(Error::Config(format!("unknown drift kind '{other}'"))),
    };

    let (k_min, k_max) = match (raw.take("levels", "k_min"), raw.take("levels", "k_max")) {
        (Some(a), Some(b)) => (
            a.parse::<u32>()
                .map_err(|_| Error::Config("k_min must be an integer".into()))?,
            b.parse::<u32>()
                .map_err(|_| Error::Config("k_max must be an integer".into()))?,
        ),
        _ => (2, 12),
    };

    let kernel = if kind == ExperimentKind::KernelSweep {
        Some(KernelConfig {
            kind: raw.require("kernel", "kind")?,
            beta: parse_f64("kernel", "beta", &raw.require("kernel", "beta")?)?,
            n_mc: parse_usize("kernel", "n_mc", &raw.require("kernel", "n_mc")?)?,
            scale_levels: parse_u32_list(
                "kernel",
                "scale_levels",
                &raw.require("kernel", "scale_levels")?,
            )?,
            sweep: raw.require("kernel", "sweep")?,
        })
    } else {
        None
    };

    let energy = if kind == ExperimentKind::EnergyThreshold {
        let n_mc = match raw.take("energy", "n_mc") {
            Some(v) => parse_usize("energy", "n_mc", &v)?,
            None => 2_000,
        };
        Some(EnergyConfig {
            kernel: raw.require("energy", "kernel")?,
            n_mc,
            beta_grid: parse_f64_list("energy", "beta_grid", &raw.require("energy", "beta_grid")?)?,
            family_levels: parse_u32_list(
                "energy",
                "family_levels",
                &raw.require("energy", "family_levels")?,
            )?,
            family: match raw.take("energy", "family") {
                Some(v) => v,
                None => "time_set".to_string(),
            },
        })
    } else {
        None
    };

    let hit_levels = if kind == ExperimentKind::HitCount {
        parse_u32_list(
            "hitcount",
            "k_values",
            &raw.require("hitcount", "k_values")?,
        )?
    } else {
        Vec::new()
    };

    raw.finish_or_report_unknown()?;

    let config = ExperimentConfig {
        kind,
        params,
        time_set,
        drift,
        k_min,
        k_max,
        n_points,
        n_replicas,
        seed,
        tolerance,
        out_dir,
        kernel,
        energy,
        hit_levels,
        canonical,
    };
    validate(&config)?;
    Ok(config)
}

/// Cross-module precondition checks; every violation names the broken
/// precondition.
fn validate(config: &ExperimentConfig) -> Result<()> {
    let ts = config
        .time_set
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    if let Some(n) = config.n_points {
        if n != ts.points.len() {
            return Err(Error::Config(format!(
                "n_points={n} does not match the time set's {} points",
                ts.points.len()
            )));
        }
    }

    match config.kind {
        ExperimentKind::GraphDim | ExperimentKind::RangeDim | ExperimentKind::ParabolicDim => {
            if config.k_max < config.k_min {
                return Err(Error::Config("k_max must be >= k_min".into()));
            }
            let usable = (config.k_max - config.k_min + 1) as usize;
            if usable < 2 * crate::cover::WINDOW_TRIM + 4 {
                return Err(Error::Config(format!(
                    "level window {}..{} leaves fewer than 4 usable levels after trimming",
                    config.k_min, config.k_max
                )));
            }
            // Grid/scale coupling: the finest counted level must stay a
            // factor 4 above the sampling resolution.
            let spacing = ts.grid_spacing();
            let finest = 0.5f64.powi(config.k_max as i32) * config.time_set.t_max.max(1.0);
            if finest < 4.0 * spacing {
                return Err(Error::Config(format!(
                    "grid/scale coupling violated: 2^-{} = {finest} < 4 * grid spacing {spacing}",
                    config.k_max
                )));
            }
        }
        ExperimentKind::HitCount => {
            let spacing = ts.grid_spacing();
            for &k in &config.hit_levels {
                let c = 0.5f64.powi(k as i32);
                if spacing > c / 4.0 {
                    return Err(Error::Config(format!(
                        "hitcount level {k} too fine for grid spacing {spacing}"
                    )));
                }
            }
        }
        ExperimentKind::KernelSweep => {
            let kc = config.kernel.as_ref().expect("kernel config parsed above");
            if kc.n_mc < 1_000 {
                return Err(Error::Config("kernel n_mc must be >= 10^3".into()));
            }
            if kc.scale_levels.len() < 2 {
                return Err(Error::Config("kernel sweep needs >= 2 scales".into()));
            }
            match kc.sweep.as_str() {
                "tau" | "delta" => {}
                other => {
                    return Err(Error::Config(format!(
                        "kernel sweep must be 'tau' or 'delta', got '{other}'"
                    )))
                }
            }
            match kc.kind.as_str() {
                "k_beta" => {}
                "kappa_beta" => {
                    if kc.beta >= config.params.dim() as f64 {
                        return Err(Error::Config(format!(
                            "kappa kernel needs beta < d; beta={}, d={}",
                            kc.beta,
                            config.params.dim()
                        )));
                    }
                }
                other => {
                    return Err(Error::Config(format!(
                        "kernel kind must be 'k_beta' or 'kappa_beta', got '{other}'"
                    )))
                }
            }
        }
        ExperimentKind::EnergyThreshold => {
            let ec = config.energy.as_ref().expect("energy config parsed above");
            ec.kernel_spec(config.params.alpha())
                .map_err(|e| Error::Config(e.to_string()))?;
            if ec.beta_grid.len() < 5 {
                return Err(Error::Config("energy beta_grid needs >= 5 values".into()));
            }
            if !ec.beta_grid.windows(2).all(|w| w[1] > w[0]) {
                return Err(Error::Config("energy beta_grid must be increasing".into()));
            }
            if ec.family_levels.len() < 3 {
                return Err(Error::Config(
                    "energy family needs >= 3 refinement levels".into(),
                ));
            }
            match ec.family.as_str() {
                "time_set" | "path_graph" => {}
                other => {
                    return Err(Error::Config(format!(
                        "energy family must be 'time_set' or 'path_graph', got '{other}'"
                    )))
                }
            }
        }
        ExperimentKind::FormulaTable => {}
    }
    Ok(())
}
