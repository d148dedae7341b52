//! Time sets with known Hausdorff dimension and a closed catalog of
//! deterministic drift functions with Hoelder metadata. These give
//! experiments analytic ground truth to compare against.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::StreamKey;
use crate::stable::{PathSample, TimeGrid};

/// Kind of finite time-set approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSetKind {
    /// The full interval `[0, t_max]`, equi-spaced points.
    Interval,
    /// Self-similar Cantor construction with contraction `ratio` in
    /// (0, 1/2]; each interval keeps its two outer `ratio`-scaled copies.
    Cantor { ratio: f64 },
}

/// A finite level-n approximation of a time set `T` in `[0, t_max]`.
#[derive(Debug, Clone)]
pub struct TimeSet {
    pub kind: TimeSetKind,
    pub level: u32,
    pub t_max: f64,
    /// Interval: the 2^n + 1 equi-spaced points including both endpoints.
    /// Cantor: the 2^n left endpoints of the surviving intervals.
    pub points: Vec<f64>,
    /// Analytic Hausdorff dimension of the limit set, when known.
    pub known_dim: Option<f64>,
}

/// Build the level-n approximation of a catalog time set.
pub fn build_time_set(kind: TimeSetKind, level: u32, t_max: f64) -> Result<TimeSet> {
    if t_max <= 0.0 || t_max.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "t_max={t_max} must be > 0"
        )));
    }
    if level > 26 {
        return Err(Error::InvalidParameter(format!(
            "level={level} would enumerate more than 2^26 points"
        )));
    }
    match kind {
        TimeSetKind::Interval => {
            let n = (1usize << level) + 1;
            let points = (0..n).map(|i| i as f64 * t_max / (n - 1) as f64).collect();
            Ok(TimeSet {
                kind,
                level,
                t_max,
                points,
                known_dim: Some(1.0),
            })
        }
        TimeSetKind::Cantor { ratio } => {
            if !(ratio > 0.0 && ratio <= 0.5) {
                return Err(Error::InvalidParameter(format!(
                    "cantor ratio={ratio} outside (0, 1/2]: intervals would overlap"
                )));
            }
            // Left endpoints of surviving intervals, refined level by level.
            let mut lefts = vec![0.0f64];
            let mut len = t_max;
            for _ in 0..level {
                let next_len = len * ratio;
                let mut next = Vec::with_capacity(lefts.len() * 2);
                for &a in &lefts {
                    next.push(a);
                    next.push(a + len - next_len);
                }
                lefts = next;
                len = next_len;
            }
            Ok(TimeSet {
                kind,
                level,
                t_max,
                points: lefts,
                known_dim: Some((2.0f64.ln() / (1.0 / ratio).ln()).min(1.0)),
            })
        }
    }
}

impl TimeSet {
    /// The surviving-interval length at this level (equals the point
    /// spacing for the interval kind). Used for grid/scale coupling
    /// checks.
    pub fn grid_spacing(&self) -> f64 {
        match self.kind {
            TimeSetKind::Interval => self.t_max / (self.points.len() - 1).max(1) as f64,
            TimeSetKind::Cantor { ratio } => self.t_max * ratio.powi(self.level as i32),
        }
    }

    /// View the point set as a simulation grid.
    pub fn to_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.points.clone(), self.t_max)
    }
}

/// Kind-specific drift parameters.
#[derive(Debug, Clone)]
pub enum DriftKind {
    Zero,
    /// Constant vector; must have the drift's spatial dimension.
    Constant(Vec<f64>),
    /// `t -> t^beta` in every coordinate, `beta` in (0, 1].
    Power {
        beta: f64,
    },
    /// Truncated Weierstrass sum `W(t) = sum_k a^(-k beta) cos(a^k t)` in
    /// every coordinate, with `a > 1` and `beta` in (0, 1).
    Weierstrass {
        base: f64,
        beta: f64,
    },
    /// A frozen path evaluated left-constantly between its grid points.
    SampledPath(PathSample),
}

/// A deterministic drift `t -> R^d` on `[0, t_max]`.
#[derive(Debug, Clone)]
pub struct DriftSpec {
    pub kind: DriftKind,
    pub dim: usize,
    pub t_max: f64,
    /// Hoelder exponent metadata, when analytically known.
    pub holder_beta: Option<f64>,
}

/// Truncation error target for the Weierstrass series: terms are kept
/// while `a^(-k beta) >= 1e-12`, which puts the remainder below the
/// resolution of every estimator in the crate.
pub const WEIERSTRASS_TRUNCATION: f64 = 1e-12;

impl DriftSpec {
    pub fn new(kind: DriftKind, dim: usize, t_max: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "drift dimension must be >= 1".into(),
            ));
        }
        if t_max <= 0.0 || t_max.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "t_max={t_max} must be > 0"
            )));
        }
        let holder_beta = match &kind {
            DriftKind::Zero => Some(1.0),
            DriftKind::Constant(c) => {
                if c.len() != dim {
                    return Err(Error::InvalidParameter(format!(
                        "constant drift has {} coordinates, expected {dim}",
                        c.len()
                    )));
                }
                Some(1.0)
            }
            DriftKind::Power { beta } => {
                if !(*beta > 0.0 && *beta <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "power exponent beta={beta} outside (0,1]"
                    )));
                }
                Some(*beta)
            }
            DriftKind::Weierstrass { base, beta } => {
                if *base <= 1.0 || base.is_nan() {
                    return Err(Error::InvalidParameter(format!(
                        "weierstrass base a={base} must be > 1"
                    )));
                }
                if !(*beta > 0.0 && *beta < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "weierstrass exponent beta={beta} outside (0,1)"
                    )));
                }
                Some(*beta)
            }
            DriftKind::SampledPath(path) => {
                if path.dim() != dim {
                    return Err(Error::InvalidParameter(format!(
                        "sampled path has dimension {}, expected {dim}",
                        path.dim()
                    )));
                }
                None
            }
        };
        Ok(DriftSpec {
            kind,
            dim,
            t_max,
            holder_beta,
        })
    }

    pub fn zero(dim: usize, t_max: f64) -> Self {
        DriftSpec::new(DriftKind::Zero, dim, t_max).expect("zero drift is always valid")
    }

    /// Number of Weierstrass terms kept for the configured truncation.
    pub fn weierstrass_terms(base: f64, beta: f64) -> u32 {
        // smallest K with base^(-K beta) < 1e-12
        let k = (-WEIERSTRASS_TRUNCATION.ln() / (beta * base.ln())).ceil();
        k as u32
    }
}

/// Evaluate a drift at time `t` in `[0, t_max]`.
pub fn eval_drift(drift: &DriftSpec, t: f64) -> Result<Vec<f64>> {
    if !(0.0..=drift.t_max).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t={t} outside drift domain [0, {}]",
            drift.t_max
        )));
    }
    Ok(eval_drift_unchecked(drift, t))
}

pub(crate) fn eval_drift_unchecked(drift: &DriftSpec, t: f64) -> Vec<f64> {
    match &drift.kind {
        DriftKind::Zero => vec![0.0; drift.dim],
        DriftKind::Constant(c) => c.clone(),
        DriftKind::Power { beta } => vec![t.powf(*beta); drift.dim],
        DriftKind::Weierstrass { base, beta } => {
            let terms = DriftSpec::weierstrass_terms(*base, *beta);
            let mut w = 0.0;
            let mut amp = 1.0;
            let mut freq = 1.0;
            for _ in 0..terms {
                w += amp * (freq * t).cos();
                amp *= base.powf(-beta);
                freq *= base;
            }
            vec![w; drift.dim]
        }
        DriftKind::SampledPath(path) => {
            // Left-constant extension: position at the last grid point <= t.
            let pts = path.grid().points();
            let idx = pts.partition_point(|&p| p <= t).saturating_sub(1);
            path.position(idx).to_vec()
        }
    }
}

/// Empirical Hoelder certificate for a drift at test exponent `beta`.
#[derive(Debug, Clone, Copy)]
pub struct HolderCertificate {
    /// Largest observed ratio ||f(t)-f(s)|| / |t-s|^beta.
    pub max_ratio: f64,
    /// Same quantity with ten times as many pairs.
    pub refined_ratio: f64,
    /// True when the constant is finite and grows less than 10% under the
    /// tenfold refinement.
    pub pass: bool,
}

/// Estimate the Hoelder constant of `drift` at exponent `beta` from
/// `n_pairs` sampled pairs and a tenfold refinement.
///
/// Pairs are drawn at dyadic separations `h = t_max * 2^-j` with uniform
/// base points, plus an anchor pair `(0, h)` per scale; refinement adds
/// finer separations, so an exponent above the true one shows up as an
/// exploding constant.
pub fn holder_certificate(
    drift: &DriftSpec,
    beta: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<HolderCertificate> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "holder exponent beta={beta} outside (0,1]"
        )));
    }
    if n_pairs < 10 {
        return Err(Error::InvalidParameter("n_pairs must be >= 10".into()));
    }
    let max_ratio = holder_max_ratio(drift, beta, n_pairs, seed);
    let refined_ratio = holder_max_ratio(drift, beta, n_pairs * 10, seed);
    let pass = max_ratio.is_finite()
        && refined_ratio.is_finite()
        && refined_ratio <= max_ratio.max(f64::MIN_POSITIVE) * 1.10;
    Ok(HolderCertificate {
        max_ratio,
        refined_ratio,
        pass,
    })
}

fn holder_max_ratio(drift: &DriftSpec, beta: f64, n_pairs: usize, seed: u64) -> f64 {
    // Scales j = 1..=J with J growing logarithmically in n_pairs, so the
    // refinement reaches finer separations.
    let scales = (n_pairs as f64).log2().ceil().max(2.0) as u32;
    let per_scale = (n_pairs / scales as usize).max(1);
    let mut worst = 0.0f64;
    for j in 1..=scales {
        let h = drift.t_max * 0.5f64.powi(j as i32);
        if h <= 0.0 {
            break;
        }
        let mut rng = StreamKey(seed).child(j as u64).rng();
        // Anchor at the domain edge where power-type drifts are steepest.
        worst = worst.max(pair_ratio(drift, 0.0, h, beta));
        for _ in 0..per_scale {
            let s = rng.random::<f64>() * (drift.t_max - h);
            worst = worst.max(pair_ratio(drift, s, s + h, beta));
        }
    }
    worst
}

fn pair_ratio(drift: &DriftSpec, s: f64, t: f64, beta: f64) -> f64 {
    let fs = eval_drift_unchecked(drift, s);
    let ft = eval_drift_unchecked(drift, t);
    let dist = fs
        .iter()
        .zip(&ft)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    dist / (t - s).abs().powf(beta)
}
