//! Monte Carlo evaluation of the difference kernels that absorb a stable
//! process into an energy integral, discrete Riesz energies of candidate
//! measures, and a capacity-style threshold probe for dimension lower
//! bounds.
//!
//! Kernel estimates share one base sample of `X_1` draws across the whole
//! `(beta, tau, delta)` grid (common random numbers): increments rescale
//! by self-similarity as `X_tau = |tau|^(1/alpha) X_1`, which makes
//! per-sample monotonicity and convexity assertions exact and removes
//! most of the variance from slope fits.

use rayon::prelude::*;

use crate::cover::PointCloud;
use crate::domains::{eval_drift_unchecked, DriftSpec, TimeSet};
use crate::error::{Error, Result};
use crate::rng::StreamKey;
use crate::stable::{sample_stable_increment, PathSample, StableParams};

/// Per-sample norm floor; kernel values are clipped at `norm >= 1e-9` to
/// avoid floating overflow near the singularity. The clip rate is
/// reported and an estimate with clip rate >= 1e-4 should be discarded.
pub const CLIP_FLOOR: f64 = 1e-9;

/// Maximum acceptable fraction of clipped samples.
pub const CLIP_RATE_LIMIT: f64 = 1e-4;

/// Partial-sum growth below this total ratio counts as converging.
/// Chosen conservatively; tune together with [`RATIO_DIVERGING`].
pub const RATIO_CONVERGING: f64 = 1.1;

/// Partial-sum growth above this total ratio counts as diverging.
pub const RATIO_DIVERGING: f64 = 2.0;

/// A query against one of the difference kernels.
#[derive(Debug, Clone)]
pub struct KernelQuery {
    pub alpha: f64,
    pub d: usize,
    pub beta: f64,
    pub tau: f64,
    pub delta: Vec<f64>,
    pub n_mc: usize,
}

impl KernelQuery {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha={} outside (0,2]",
                self.alpha
            )));
        }
        if self.d == 0 || self.delta.len() != self.d {
            return Err(Error::InvalidParameter(format!(
                "delta has {} coordinates, expected d={}",
                self.delta.len(),
                self.d
            )));
        }
        if self.beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta={} must be >= 0",
                self.beta
            )));
        }
        let t = self.tau.abs();
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidParameter(format!("|tau|={t} outside (0,1]")));
        }
        let dn = norm(&self.delta);
        if dn > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "||delta||={dn} outside [0,1]"
            )));
        }
        if self.n_mc < 1_000 {
            return Err(Error::InvalidParameter(format!(
                "n_mc={} must be >= 10^3",
                self.n_mc
            )));
        }
        Ok(())
    }
}

/// A Monte Carlo kernel estimate.
#[derive(Debug, Clone, Copy)]
pub struct KernelEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub clip_rate: f64,
    pub n_mc: usize,
}

#[inline]
fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Shared base draws of `X_1` for common-random-number kernel grids.
#[derive(Debug, Clone)]
pub struct SharedStableSamples {
    params: StableParams,
    /// Row-major `(n x d)` draws of X_1.
    draws: Vec<f64>,
}

impl SharedStableSamples {
    /// Generate `n` draws of `X_1` in blocks of 4096, one substream per
    /// block, so the sample does not depend on the thread count.
    pub fn generate(params: &StableParams, n: usize, seed: u64) -> Self {
        const BLOCK: usize = 4096;
        let d = params.dim();
        let key = StreamKey(seed);
        let n_blocks = n.div_ceil(BLOCK);
        let mut draws = vec![0.0; n * d];
        draws
            .par_chunks_mut(BLOCK * d)
            .enumerate()
            .for_each(|(b, chunk)| {
                let mut rng = key.child(b as u64).rng();
                for row in chunk.chunks_exact_mut(d) {
                    let x = sample_stable_increment(params, 1.0, &mut rng)
                        .expect("dt=1 is always valid");
                    row.copy_from_slice(&x);
                }
            });
        debug_assert!(n_blocks * BLOCK >= n);
        SharedStableSamples {
            params: *params,
            draws,
        }
    }

    pub fn params(&self) -> &StableParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.draws.len() / self.params.dim().max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Estimate `E ||(tau, sign(tau) X_|tau| + delta)||^-beta` on the
    /// shared sample.
    pub fn kernel_k(&self, beta: f64, tau: f64, delta: &[f64]) -> KernelEstimate {
        self.estimate(beta, tau, delta, true)
    }

    /// Estimate `E ||sign(tau) X_|tau| + delta||^-beta` on the shared
    /// sample. Requires `beta < d` (the kernel may be non-integrable
    /// otherwise) and accepts `tau = 0`, where the increment vanishes.
    pub fn kernel_kappa(&self, beta: f64, tau: f64, delta: &[f64]) -> Result<KernelEstimate> {
        if beta >= self.params.dim() as f64 {
            return Err(Error::InvalidParameter(format!(
                "kappa kernel needs beta < d; beta={beta}, d={}",
                self.params.dim()
            )));
        }
        Ok(self.estimate(beta, tau, delta, false))
    }

    fn estimate(&self, beta: f64, tau: f64, delta: &[f64], with_time: bool) -> KernelEstimate {
        let d = self.params.dim();
        debug_assert_eq!(delta.len(), d);
        let n = self.len();
        let scale = if tau == 0.0 {
            0.0
        } else {
            tau.abs().powf(1.0 / self.params.alpha())
        };
        let sign = if tau < 0.0 { -1.0 } else { 1.0 };
        let base = if with_time { tau * tau } else { 0.0 };
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut clipped = 0usize;
        for row in self.draws.chunks_exact(d) {
            let mut sq = base;
            for j in 0..d {
                let y = sign * scale * row[j] + delta[j];
                sq += y * y;
            }
            let mut nrm = sq.sqrt();
            if nrm < CLIP_FLOOR {
                nrm = CLIP_FLOOR;
                clipped += 1;
            }
            let v = nrm.powf(-beta);
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean).max(0.0);
        KernelEstimate {
            mean,
            stderr: (var / n as f64).sqrt(),
            clip_rate: clipped as f64 / n as f64,
            n_mc: n,
        }
    }
}

/// One-shot estimate of the graph difference kernel
/// `K^beta(tau, delta) = E ||(tau, sign(tau) X_|tau| + delta)||^-beta`.
pub fn kernel_k(query: &KernelQuery, seed: u64) -> Result<KernelEstimate> {
    query.validate()?;
    let params = StableParams::new(query.alpha, query.d)?;
    let samples = SharedStableSamples::generate(&params, query.n_mc, seed);
    Ok(samples.kernel_k(query.beta, query.tau, &query.delta))
}

/// One-shot estimate of the range difference kernel
/// `kappa^beta(tau, delta) = E ||sign(tau) X_|tau| + delta||^-beta`.
pub fn kernel_kappa(query: &KernelQuery, seed: u64) -> Result<KernelEstimate> {
    query.validate()?;
    let params = StableParams::new(query.alpha, query.d)?;
    let samples = SharedStableSamples::generate(&params, query.n_mc, seed);
    samples.kernel_kappa(query.beta, query.tau, &query.delta)
}

/// A discrete probability measure on graph points in `R^(1+d)`.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub atoms: PointCloud,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn uniform(atoms: PointCloud) -> Result<Self> {
        let n = atoms.len();
        if n == 0 {
            return Err(Error::InvalidParameter("measure needs atoms".into()));
        }
        Ok(DiscreteMeasure {
            atoms,
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total mass of atoms whose time coordinate lies in `[a, b]`.
    pub fn time_interval_mass(&self, a: f64, b: f64) -> f64 {
        self.atoms
            .iter_points()
            .zip(&self.weights)
            .filter(|(p, _)| p[0] >= a && p[0] <= b)
            .map(|(_, w)| w)
            .sum()
    }
}

/// The uniform probability measure on the graph `{(t, f(t))}` over the
/// finite time-set approximation.
///
/// The drift is centred per coordinate and, if necessary, shrunk so that
/// `||f|| <= 1/2` over the window, matching the ball hypothesis the
/// energy estimates rely on. Zero and already-small drifts pass through
/// centring unchanged in shape.
pub fn frostman_candidate(time_set: &TimeSet, drift: &DriftSpec) -> Result<DiscreteMeasure> {
    if time_set.points.is_empty() {
        return Err(Error::InvalidParameter("empty time set".into()));
    }
    let d = drift.dim;
    let n = time_set.points.len();
    let mut values = Vec::with_capacity(n);
    for &t in &time_set.points {
        values.push(eval_drift_unchecked(drift, t));
    }
    // Centre each coordinate at the midpoint of its observed span.
    let mut centre = vec![0.0; d];
    for j in 0..d {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &values {
            lo = lo.min(v[j]);
            hi = hi.max(v[j]);
        }
        centre[j] = 0.5 * (lo + hi);
    }
    let mut max_norm: f64 = 0.0;
    for v in &mut values {
        for j in 0..d {
            v[j] -= centre[j];
        }
        max_norm = max_norm.max(norm(v));
    }
    let shrink = if max_norm > 0.5 { 0.5 / max_norm } else { 1.0 };
    let mut atoms = PointCloud::with_capacity(1 + d, n);
    let mut row = vec![0.0; 1 + d];
    for (i, &t) in time_set.points.iter().enumerate() {
        row[0] = t;
        for j in 0..d {
            row[1 + j] = values[i][j] * shrink;
        }
        atoms.push(&row);
    }
    DiscreteMeasure::uniform(atoms)
}

/// Kernel used inside a discrete energy.
#[derive(Debug, Clone, Copy)]
pub enum KernelSpec {
    /// `||p - q||^-beta` on the raw atom coordinates.
    Euclidean,
    /// Graph difference kernel `K^beta` with the process absorbed into
    /// the kernel by Monte Carlo on a shared sample.
    KBeta { alpha: f64, n_mc: usize },
    /// Range difference kernel `kappa^beta`.
    KappaBeta { alpha: f64, n_mc: usize },
}

impl KernelSpec {
    pub fn as_str(&self) -> &'static str {
        match self {
            KernelSpec::Euclidean => "euclidean",
            KernelSpec::KBeta { .. } => "k_beta",
            KernelSpec::KappaBeta { .. } => "kappa_beta",
        }
    }
}

/// Convergence verdict for a refinement family of partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Diverging,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::Diverging => "diverging",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Discretised energy of a measure family across refinement levels.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub beta: f64,
    /// Atom counts of the family levels, coarse to fine.
    pub levels: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub verdict: Verdict,
    pub threshold_estimate: Option<f64>,
}

/// Off-diagonal double sum `sum_{i != j} w_i w_j K(p_i - p_j)` of one
/// measure. The reduction is chunked in a fixed order, so the result does
/// not depend on the thread count.
pub fn discrete_energy(
    mu: &DiscreteMeasure,
    kernel: &KernelSpec,
    beta: f64,
    seed: u64,
) -> Result<f64> {
    if mu.len() < 2 {
        return Err(Error::InvalidParameter(
            "energy needs at least 2 atoms".into(),
        ));
    }
    let d = mu.atoms.axes() - 1;
    let shared = match kernel {
        KernelSpec::Euclidean => None,
        KernelSpec::KBeta { alpha, n_mc } | KernelSpec::KappaBeta { alpha, n_mc } => {
            if *n_mc < 1_000 {
                return Err(Error::InvalidParameter(format!(
                    "n_mc={n_mc} must be >= 10^3"
                )));
            }
            if matches!(kernel, KernelSpec::KappaBeta { .. }) && beta >= d as f64 {
                return Err(Error::InvalidParameter(format!(
                    "kappa kernel needs beta < d; beta={beta}, d={d}"
                )));
            }
            let params = StableParams::new(*alpha, d)?;
            Some(SharedStableSamples::generate(&params, *n_mc, seed))
        }
    };

    let n = mu.len();
    // Row sums in index order; pairs are (i, j > i), doubled by symmetry.
    let row_sums: Vec<f64> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let pi = mu.atoms.point(i);
            let wi = mu.weights[i];
            let mut acc = 0.0;
            let mut delta = vec![0.0; d];
            for j in (i + 1)..n {
                let pj = mu.atoms.point(j);
                let value = match kernel {
                    KernelSpec::Euclidean => {
                        let mut sq = 0.0;
                        for a in 0..mu.atoms.axes() {
                            let diff = pi[a] - pj[a];
                            sq += diff * diff;
                        }
                        sq.sqrt().max(CLIP_FLOOR).powf(-beta)
                    }
                    KernelSpec::KBeta { .. } => {
                        let tau = pi[0] - pj[0];
                        for a in 0..d {
                            delta[a] = pi[1 + a] - pj[1 + a];
                        }
                        shared.as_ref().unwrap().kernel_k(beta, tau, &delta).mean
                    }
                    KernelSpec::KappaBeta { .. } => {
                        let tau = pi[0] - pj[0];
                        for a in 0..d {
                            delta[a] = pi[1 + a] - pj[1 + a];
                        }
                        shared
                            .as_ref()
                            .unwrap()
                            .kernel_kappa(beta, tau, &delta)
                            .expect("beta < d checked above")
                            .mean
                    }
                };
                acc += wi * mu.weights[j] * value;
            }
            acc
        })
        .collect();
    Ok(2.0 * row_sums.iter().sum::<f64>())
}

/// Evaluate the discretised energy across a refinement family (coarse to
/// fine) and compare partial sums.
///
/// With `total = E_last / E_first` and `final = E_last / E_prev`, the
/// verdict is diverging when `total >` [`RATIO_DIVERGING`], converging
/// when `final <` [`RATIO_CONVERGING`] and the total stayed bounded, and
/// inconclusive otherwise. A verdict needs at least 3 levels.
pub fn energy_integral(
    family: &[DiscreteMeasure],
    kernel: &KernelSpec,
    beta: f64,
    seed: u64,
) -> Result<EnergyReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty measure family".into()));
    }
    let mut partial_sums = Vec::with_capacity(family.len());
    let mut levels = Vec::with_capacity(family.len());
    for mu in family {
        partial_sums.push(discrete_energy(mu, kernel, beta, seed)?);
        levels.push(mu.len());
    }
    let verdict = if family.len() < 3 {
        Verdict::Inconclusive
    } else {
        let first = partial_sums[0];
        let last = partial_sums[partial_sums.len() - 1];
        let prev = partial_sums[partial_sums.len() - 2];
        let total = last / first;
        let final_ratio = last / prev;
        if total > RATIO_DIVERGING {
            Verdict::Diverging
        } else if final_ratio < RATIO_CONVERGING {
            Verdict::Converging
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(EnergyReport {
        beta,
        levels,
        partial_sums,
        verdict,
        threshold_estimate: None,
    })
}

/// Result of the capacity threshold search.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    /// Midpoint of the final bracket, resolved to [`BISECTION_RESOLUTION`].
    pub beta_star: f64,
    /// Final `(converging, non-converging)` bracket.
    pub bracket: (f64, f64),
    /// Full energy reports for the initial grid.
    pub grid: Vec<EnergyReport>,
}

/// Bisection stops once the bracket is at most this wide.
pub const BISECTION_RESOLUTION: f64 = 0.05;

/// Locate the largest exponent with a converging energy over `beta_grid`
/// and refine it by bisection. Interpreted as a lower-bound-style
/// dimension probe.
pub fn capacity_threshold(
    family: &[DiscreteMeasure],
    kernel: &KernelSpec,
    beta_grid: &[f64],
    seed: u64,
) -> Result<ThresholdReport> {
    if beta_grid.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "beta grid needs >= 5 values, got {}",
            beta_grid.len()
        )));
    }
    if !beta_grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter(
            "beta grid must be strictly increasing".into(),
        ));
    }
    let mut grid = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        grid.push(energy_integral(family, kernel, beta, seed)?);
    }
    let converging_idx = grid
        .iter()
        .rposition(|r| r.verdict == Verdict::Converging)
        .ok_or_else(|| {
            Error::Inconclusive(
                "no converging exponent on the grid; extend it toward smaller beta".into(),
            )
        })?;
    if converging_idx == grid.len() - 1 {
        return Err(Error::Inconclusive(
            "every grid exponent converges; extend the grid toward larger beta".into(),
        ));
    }
    let mut lo = grid[converging_idx].beta;
    let mut hi = grid[converging_idx + 1].beta;
    while hi - lo > BISECTION_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        let verdict = energy_integral(family, kernel, mid, seed)?.verdict;
        if verdict == Verdict::Converging {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdReport {
        beta_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        grid,
    })
}

/// Frostman candidates for one catalog time set at several refinement
/// levels (coarse to fine).
pub fn time_set_family(
    kind: crate::domains::TimeSetKind,
    levels: &[u32],
    t_max: f64,
    drift: &DriftSpec,
) -> Result<Vec<DiscreteMeasure>> {
    let mut family = Vec::with_capacity(levels.len());
    for &level in levels {
        let ts = crate::domains::build_time_set(kind, level, t_max)?;
        family.push(frostman_candidate(&ts, drift)?);
    }
    Ok(family)
}

/// Uniform measures on nested dyadic subsamples of a path graph, coarse
/// to fine; `sub_levels` lists exponents j for 2^j + 1 atoms each.
pub fn path_graph_family(path: &PathSample, sub_levels: &[u32]) -> Result<Vec<DiscreteMeasure>> {
    let n = path.len();
    let mut family = Vec::with_capacity(sub_levels.len());
    for &j in sub_levels {
        let atoms_wanted = (1usize << j) + 1;
        if atoms_wanted > n {
            return Err(Error::InvalidParameter(format!(
                "subsample level {j} needs {atoms_wanted} atoms but the path has {n} points"
            )));
        }
        let stride = (n - 1) / (atoms_wanted - 1);
        let d = path.dim();
        let mut atoms = PointCloud::with_capacity(1 + d, atoms_wanted);
        let mut row = vec![0.0; 1 + d];
        for a in 0..atoms_wanted {
            let i = a * stride;
            row[0] = path.time(i);
            row[1..].copy_from_slice(path.position(i));
            atoms.push(&row);
        }
        family.push(DiscreteMeasure::uniform(atoms)?);
    }
    Ok(family)
}
