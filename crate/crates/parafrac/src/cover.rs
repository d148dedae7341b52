//! Occupancy counting over anisotropic cylinder grids and the dimension
//! estimates derived from the counts.
//!
//! A level-k cylinder has time side `2^-k` and space side `2^(-k/alpha)`;
//! cells are half-open and anchored at the origin-aligned dyadic lattice,
//! so every point maps to exactly one integer index and counts are
//! reproducible bit-for-bit. Counting may be partitioned across workers;
//! partial cell sets merge by set union, which makes the result identical
//! to serial execution by construction.

use std::collections::HashSet;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::domains::{eval_drift_unchecked, DriftSpec};
use crate::error::{Error, Result};
use crate::stable::PathSample;
use crate::stats;

type CellKey = SmallVec<[i64; 4]>;

/// A finite point cloud in `R^axes`. Axis 0 is the time axis when the
/// cloud is counted parabolically; with gauge alpha = 1 all axes scale
/// identically and the count is the plain Euclidean box count.
#[derive(Debug, Clone)]
pub struct PointCloud {
    data: Vec<f64>,
    axes: usize,
}

impl PointCloud {
    pub fn new(axes: usize) -> Self {
        PointCloud {
            data: Vec::new(),
            axes,
        }
    }

    pub fn with_capacity(axes: usize, n_points: usize) -> Self {
        PointCloud {
            data: Vec::with_capacity(axes * n_points),
            axes,
        }
    }

    pub fn push(&mut self, point: &[f64]) {
        debug_assert_eq!(point.len(), self.axes);
        self.data.extend_from_slice(point);
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.axes
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.axes..(i + 1) * self.axes]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.axes)
    }

    /// Append all points of another cloud with the same axis count.
    pub fn extend_from(&mut self, other: &PointCloud) {
        assert_eq!(self.axes, other.axes);
        self.data.extend_from_slice(&other.data);
    }

    /// Divide the time axis by `factor`. Used to map a horizon `t_max > 1`
    /// into `[0, 1]` before counting; the affine change of the time scale
    /// shifts every log-count by a constant and leaves the slope alone.
    pub fn rescale_time(mut self, factor: f64) -> Self {
        assert!(factor > 0.0);
        let axes = self.axes;
        for i in 0..self.len() {
            self.data[i * axes] /= factor;
        }
        self
    }
}

/// Which scale variable the log-log regression runs against.
///
/// `TimeGauge` regresses `log N_k` on `log 2^k`; `DiamGauge` regresses on
/// `log(1/|P_k|)` with `|P_k| ~ 2^(-k min(1, 1/alpha))`. The two
/// regressors differ by the constant factor `alpha v 1`, so the returned
/// dimension is computed once and is identical in both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    TimeGauge,
    DiamGauge,
}

impl Gauge {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gauge::TimeGauge => "time_gauge",
            Gauge::DiamGauge => "diam_gauge",
        }
    }
}

/// Per-scale occupancy counts of a point cloud under the alpha-gauge.
#[derive(Debug, Clone)]
pub struct ScalingLedger {
    pub alpha: f64,
    pub levels: Vec<u32>,
    pub counts: Vec<u64>,
    pub n_points: usize,
    pub convention: Gauge,
}

impl ScalingLedger {
    /// Construct a ledger from precomputed counts (used for synthetic
    /// power-law fixtures and CSV round-trips).
    pub fn from_counts(
        alpha: f64,
        levels: Vec<u32>,
        counts: Vec<u64>,
        n_points: usize,
        convention: Gauge,
    ) -> Result<Self> {
        if levels.len() != counts.len() || levels.is_empty() {
            return Err(Error::InvalidParameter(
                "ledger needs matching non-empty levels and counts".into(),
            ));
        }
        if counts.iter().any(|&c| c == 0 || c as usize > n_points) {
            return Err(Error::InvalidParameter(
                "ledger counts must lie in [1, n_points]".into(),
            ));
        }
        Ok(ScalingLedger {
            alpha,
            levels,
            counts,
            n_points,
            convention,
        })
    }

    /// Time side of a level-k cylinder.
    pub fn time_side(&self, k: u32) -> f64 {
        0.5f64.powi(k as i32)
    }

    /// Space side of a level-k cylinder.
    pub fn space_side(&self, k: u32) -> f64 {
        (-(k as f64) / self.alpha).exp2()
    }
}

/// Integer lattice index of the level-k cylinder containing `point`.
///
/// Index 0 holds `floor(t * 2^k)`; the remaining axes hold
/// `floor(x_j * 2^(k/alpha))`. Cells are half-open, so boundary points
/// belong to the cell on their right.
pub fn cell_index(alpha: f64, k: u32, point: &[f64]) -> Vec<i64> {
    let mut key = CellKey::new();
    write_cell_index(alpha, k, point, &mut key);
    key.to_vec()
}

#[inline]
fn write_cell_index(alpha: f64, k: u32, point: &[f64], key: &mut CellKey) {
    key.clear();
    let time_factor = (k as f64).exp2();
    let space_factor = (k as f64 / alpha).exp2();
    key.push((point[0] * time_factor).floor() as i64);
    for &x in &point[1..] {
        key.push((x * space_factor).floor() as i64);
    }
}

/// Count distinct occupied level-k cylinders for every requested level.
///
/// Levels are deduplicated and sorted ascending in the ledger. Counting
/// partitions the cloud across workers and merges partial cell sets by
/// union, so the counts do not depend on the partition.
pub fn occupancy(
    cloud: &PointCloud,
    alpha: f64,
    levels: &[u32],
    convention: Gauge,
) -> Result<ScalingLedger> {
    if cloud.is_empty() {
        return Err(Error::InvalidParameter(
            "occupancy of an empty cloud".into(),
        ));
    }
    if levels.is_empty() {
        return Err(Error::InvalidParameter(
            "occupancy needs at least one level".into(),
        ));
    }
    if alpha <= 0.0 || alpha.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "gauge alpha={alpha} must be > 0"
        )));
    }
    let mut sorted: Vec<u32> = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let counts: Vec<u64> = sorted
        .iter()
        .map(|&k| {
            let chunk_points = 1usize << 14;
            let cells = cloud
                .data
                .par_chunks(chunk_points * cloud.axes)
                .fold(HashSet::<CellKey>::new, |mut set, chunk| {
                    let mut key = CellKey::new();
                    for p in chunk.chunks_exact(cloud.axes) {
                        write_cell_index(alpha, k, p, &mut key);
                        if !set.contains(&key) {
                            set.insert(key.clone());
                        }
                    }
                    set
                })
                .reduce(HashSet::new, |a, b| {
                    if a.len() < b.len() {
                        reduce_into(b, a)
                    } else {
                        reduce_into(a, b)
                    }
                });
            cells.len() as u64
        })
        .collect();

    Ok(ScalingLedger {
        alpha,
        levels: sorted,
        counts,
        n_points: cloud.len(),
        convention,
    })
}

fn reduce_into(mut big: HashSet<CellKey>, small: HashSet<CellKey>) -> HashSet<CellKey> {
    big.extend(small);
    big
}

/// A box-dimension estimate from a ledger.
#[derive(Debug, Clone, Copy)]
pub struct DimEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Inclusive level window actually used by the regression.
    pub window: (u32, u32),
    pub convention: Gauge,
}

/// Number of coarsest and finest levels dropped before the regression.
/// Coarse levels saturate (few cells); the finest are point-cloud-limited.
pub const WINDOW_TRIM: usize = 2;

/// Least-squares dimension estimate under the ledger's own convention.
pub fn estimate_dimension(ledger: &ScalingLedger) -> Result<DimEstimate> {
    estimate_dimension_with(ledger, ledger.convention)
}

/// Least-squares dimension estimate under an explicit convention.
///
/// The slope is fitted once against the time-gauge regressor `k ln 2` and
/// rescaled by `alpha v 1`; the diameter-gauge regressor is the same up to
/// that constant, so both conventions return bit-identical values.
pub fn estimate_dimension_with(ledger: &ScalingLedger, convention: Gauge) -> Result<DimEstimate> {
    let n = ledger.levels.len();
    if n < 2 * WINDOW_TRIM + 4 {
        return Err(Error::InsufficientData(format!(
            "need >= 4 usable levels after trimming {WINDOW_TRIM}+{WINDOW_TRIM}, got {n} total"
        )));
    }
    let lo = WINDOW_TRIM;
    let hi = n - WINDOW_TRIM;
    let xs: Vec<f64> = ledger.levels[lo..hi]
        .iter()
        .map(|&k| k as f64 * std::f64::consts::LN_2)
        .collect();
    let ys: Vec<f64> = ledger.counts[lo..hi]
        .iter()
        .map(|&c| (c as f64).ln())
        .collect();
    let fit = stats::ols(&xs, &ys)?;
    let scale = ledger.alpha.max(1.0);
    Ok(DimEstimate {
        value: fit.slope * scale,
        stderr: fit.slope_stderr * scale,
        window: (ledger.levels[lo], ledger.levels[hi - 1]),
        convention,
    })
}

/// Per-window hit counts: for each time cell of width `2^-k` met by the
/// path, the number of distinct space cells of side `2^(-k/alpha)` the
/// sampled path visits inside that window.
pub fn hit_count_statistic(path: &PathSample, k: u32) -> Result<Vec<u64>> {
    let c = 0.5f64.powi(k as i32);
    let max_gap = path.grid().max_gap();
    if max_gap > c / 4.0 {
        return Err(Error::InvalidParameter(format!(
            "grid too coarse for level {k}: spacing {max_gap} > {}",
            c / 4.0
        )));
    }
    let alpha = path.params().alpha();
    let space_factor = (k as f64 / alpha).exp2();
    let time_factor = (k as f64).exp2();
    let d = path.dim();
    let mut windows: Vec<(i64, HashSet<CellKey>)> = Vec::new();
    for i in 0..path.len() {
        let w = (path.time(i) * time_factor).floor() as i64;
        if windows.last().map(|(lw, _)| *lw) != Some(w) {
            windows.push((w, HashSet::new()));
        }
        let mut key = CellKey::new();
        for j in 0..d {
            key.push((path.position(i)[j] * space_factor).floor() as i64);
        }
        windows.last_mut().unwrap().1.insert(key);
    }
    Ok(windows.into_iter().map(|(_, s)| s.len() as u64).collect())
}

/// Graph cloud `{(t, X_t + f(t))}` of a path plus drift.
pub fn graph_cloud(path: &PathSample, drift: &DriftSpec) -> Result<PointCloud> {
    if drift.dim != path.dim() {
        return Err(Error::InvalidParameter(format!(
            "drift dimension {} != path dimension {}",
            drift.dim,
            path.dim()
        )));
    }
    if drift.t_max < path.grid().t_max() {
        return Err(Error::InvalidParameter(
            "drift domain does not cover the path grid".into(),
        ));
    }
    let d = path.dim();
    let mut cloud = PointCloud::with_capacity(1 + d, path.len());
    let mut row = vec![0.0; 1 + d];
    for i in 0..path.len() {
        let t = path.time(i);
        let f = eval_drift_unchecked(drift, t);
        row[0] = t;
        for j in 0..d {
            row[1 + j] = path.position(i)[j] + f[j];
        }
        cloud.push(&row);
    }
    Ok(cloud)
}

/// Range cloud `{X_t + f(t)}`: the graph cloud with the time axis dropped.
pub fn range_cloud(path: &PathSample, drift: &DriftSpec) -> Result<PointCloud> {
    if drift.dim != path.dim() {
        return Err(Error::InvalidParameter(format!(
            "drift dimension {} != path dimension {}",
            drift.dim,
            path.dim()
        )));
    }
    if drift.t_max < path.grid().t_max() {
        return Err(Error::InvalidParameter(
            "drift domain does not cover the path grid".into(),
        ));
    }
    let d = path.dim();
    let mut cloud = PointCloud::with_capacity(d, path.len());
    let mut row = vec![0.0; d];
    for i in 0..path.len() {
        let f = eval_drift_unchecked(drift, path.time(i));
        for j in 0..d {
            row[j] = path.position(i)[j] + f[j];
        }
        cloud.push(&row);
    }
    Ok(cloud)
}
