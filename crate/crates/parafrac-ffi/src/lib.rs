//! C ABI for the parafrac toolkit.
//!
//! Handles are opaque pointers created and freed by this library; every
//! fallible call returns a [`ParafracStatus`] and writes results through
//! out-pointers. No call unwinds across the boundary.
//!
//! The matching header is generated into `include/parafrac.h` at build
//! time.

use std::panic::{catch_unwind, AssertUnwindSafe};

use parafrac::cover::{
    estimate_dimension, graph_cloud, occupancy, range_cloud, Gauge, ScalingLedger,
};
use parafrac::domains::DriftSpec;
use parafrac::energy::{kernel_k, kernel_kappa, KernelQuery};
use parafrac::error::Error;
use parafrac::formulas;
use parafrac::stable::{simulate_path, PathSample, StableParams, TimeGrid};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParafracStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InsufficientData = 3,
    Inconclusive = 4,
    RuntimeError = 5,
}

fn status_of(err: &Error) -> ParafracStatus {
    match err {
        Error::InvalidParameter(_) | Error::Config(_) | Error::NotApplicable(_) => {
            ParafracStatus::InvalidParameter
        }
        Error::InsufficientData(_) => ParafracStatus::InsufficientData,
        Error::Inconclusive(_) => ParafracStatus::Inconclusive,
        Error::Io(_) => ParafracStatus::RuntimeError,
    }
}

fn guarded<F: FnOnce() -> ParafracStatus>(f: F) -> ParafracStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => ParafracStatus::RuntimeError,
    }
}

/// A simulated path (opaque).
pub struct ParafracPath {
    inner: PathSample,
}

/// Per-scale occupancy counts (opaque).
pub struct ParafracLedger {
    inner: ScalingLedger,
}

/// Simulate an isotropic stable path on a uniform grid of `n_points`
/// covering `[0, t_max]` and return an owned handle in `out`.
///
/// # Safety
/// `out` must be a valid pointer. The handle must be released with
/// [`parafrac_path_free`].
#[no_mangle]
pub unsafe extern "C" fn parafrac_path_simulate(
    alpha: f64,
    dim: usize,
    n_points: usize,
    t_max: f64,
    seed: u64,
    out: *mut *mut ParafracPath,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    guarded(|| {
        let params = match StableParams::new(alpha, dim) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        let grid = match TimeGrid::uniform(n_points, t_max) {
            Ok(g) => g,
            Err(e) => return status_of(&e),
        };
        let path = simulate_path(&params, &grid, seed);
        unsafe {
            *out = Box::into_raw(Box::new(ParafracPath { inner: path }));
        }
        ParafracStatus::Ok
    })
}

/// Number of grid points in a path handle; 0 for a null handle.
///
/// # Safety
/// `path` must be null or a live handle from [`parafrac_path_simulate`].
#[no_mangle]
pub unsafe extern "C" fn parafrac_path_len(path: *const ParafracPath) -> usize {
    if path.is_null() {
        return 0;
    }
    unsafe { (*path).inner.len() }
}

/// Spatial dimension of a path handle; 0 for a null handle.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn parafrac_path_dim(path: *const ParafracPath) -> usize {
    if path.is_null() {
        return 0;
    }
    unsafe { (*path).inner.dim() }
}

/// Copy the i-th sample: time into `time_out`, `dim` coordinates into
/// `coords_out`.
///
/// # Safety
/// `path` must be a live handle; `time_out` must hold one double and
/// `coords_out` at least `parafrac_path_dim(path)` doubles.
#[no_mangle]
pub unsafe extern "C" fn parafrac_path_point(
    path: *const ParafracPath,
    index: usize,
    time_out: *mut f64,
    coords_out: *mut f64,
) -> ParafracStatus {
    if path.is_null() || time_out.is_null() || coords_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    guarded(|| unsafe {
        let p = &(*path).inner;
        if index >= p.len() {
            return ParafracStatus::InvalidParameter;
        }
        *time_out = p.time(index);
        let pos = p.position(index);
        std::ptr::copy_nonoverlapping(pos.as_ptr(), coords_out, pos.len());
        ParafracStatus::Ok
    })
}

/// Release a path handle (null is a no-op).
///
/// # Safety
/// `path` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn parafrac_path_free(path: *mut ParafracPath) {
    if !path.is_null() {
        drop(unsafe { Box::from_raw(path) });
    }
}

unsafe fn occupancy_handle(
    path: *const ParafracPath,
    range_only: bool,
    gauge_alpha: f64,
    k_min: u32,
    k_max: u32,
    out: *mut *mut ParafracLedger,
) -> ParafracStatus {
    if path.is_null() || out.is_null() {
        return ParafracStatus::NullPointer;
    }
    guarded(|| {
        let p = unsafe { &(*path).inner };
        if k_max < k_min {
            return ParafracStatus::InvalidParameter;
        }
        let drift = DriftSpec::zero(p.dim(), p.grid().t_max().max(f64::MIN_POSITIVE));
        let cloud = if range_only {
            range_cloud(p, &drift)
        } else {
            graph_cloud(p, &drift)
        };
        let cloud = match cloud {
            Ok(c) => c,
            Err(e) => return status_of(&e),
        };
        let levels: Vec<u32> = (k_min..=k_max).collect();
        match occupancy(&cloud, gauge_alpha, &levels, Gauge::TimeGauge) {
            Ok(ledger) => {
                unsafe {
                    *out = Box::into_raw(Box::new(ParafracLedger { inner: ledger }));
                }
                ParafracStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Count occupied cylinders of the path's graph under `gauge_alpha` for
/// levels `k_min..=k_max` and return a ledger handle.
///
/// # Safety
/// `path` must be a live handle and `out` a valid pointer; release the
/// ledger with [`parafrac_ledger_free`].
#[no_mangle]
pub unsafe extern "C" fn parafrac_graph_occupancy(
    path: *const ParafracPath,
    gauge_alpha: f64,
    k_min: u32,
    k_max: u32,
    out: *mut *mut ParafracLedger,
) -> ParafracStatus {
    unsafe { occupancy_handle(path, false, gauge_alpha, k_min, k_max, out) }
}

/// Same as [`parafrac_graph_occupancy`] for the range (time axis
/// dropped; the gauge should be 1 for a Euclidean count).
///
/// # Safety
/// As for [`parafrac_graph_occupancy`].
#[no_mangle]
pub unsafe extern "C" fn parafrac_range_occupancy(
    path: *const ParafracPath,
    gauge_alpha: f64,
    k_min: u32,
    k_max: u32,
    out: *mut *mut ParafracLedger,
) -> ParafracStatus {
    unsafe { occupancy_handle(path, true, gauge_alpha, k_min, k_max, out) }
}

/// Number of levels in a ledger handle; 0 for null.
///
/// # Safety
/// `ledger` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn parafrac_ledger_len(ledger: *const ParafracLedger) -> usize {
    if ledger.is_null() {
        return 0;
    }
    unsafe { (*ledger).inner.levels.len() }
}

/// Copy the i-th ledger row into `k_out` and `count_out`.
///
/// # Safety
/// `ledger` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn parafrac_ledger_row(
    ledger: *const ParafracLedger,
    index: usize,
    k_out: *mut u32,
    count_out: *mut u64,
) -> ParafracStatus {
    if ledger.is_null() || k_out.is_null() || count_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    let l = unsafe { &(*ledger).inner };
    if index >= l.levels.len() {
        return ParafracStatus::InvalidParameter;
    }
    unsafe {
        *k_out = l.levels[index];
        *count_out = l.counts[index];
    }
    ParafracStatus::Ok
}

/// Least-squares dimension estimate of a ledger.
///
/// # Safety
/// `ledger` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn parafrac_ledger_estimate(
    ledger: *const ParafracLedger,
    value_out: *mut f64,
    stderr_out: *mut f64,
) -> ParafracStatus {
    if ledger.is_null() || value_out.is_null() || stderr_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    guarded(|| {
        let l = unsafe { &(*ledger).inner };
        match estimate_dimension(l) {
            Ok(est) => {
                unsafe {
                    *value_out = est.value;
                    *stderr_out = est.stderr;
                }
                ParafracStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a ledger handle (null is a no-op).
///
/// # Safety
/// `ledger` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn parafrac_ledger_free(ledger: *mut ParafracLedger) {
    if !ledger.is_null() {
        drop(unsafe { Box::from_raw(ledger) });
    }
}

fn write_point(
    result: parafrac::error::Result<formulas::FormulaResult>,
    out: *mut f64,
) -> ParafracStatus {
    match result {
        Ok(r) => {
            unsafe {
                *out = r.value.point();
            }
            ParafracStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Parabolic graph dimension of a constant drift: `(alpha v 1) dim_T`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_constant_drift_phi(
    alpha: f64,
    dim_t: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::constant_drift_phi(alpha, dim_t), out)
}

/// Parabolic dimension of the process graph: `(alpha v 1) dim_T`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_process_graph_phi(
    alpha: f64,
    dim_t: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::process_graph_phi(alpha, dim_t), out)
}

/// Range dimension of the driftless process: `min(alpha dim_T, d)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_process_range_dim(
    alpha: f64,
    d: usize,
    dim_t: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::process_range_dim(alpha, d, dim_t), out)
}

/// Graph dimension with drift from `phi_alpha` (pass phi_1 for
/// `alpha <= 1`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_graph_dim_with_drift(
    alpha: f64,
    d: usize,
    phi_alpha: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::graph_dim_with_drift(alpha, d, phi_alpha), out)
}

/// Range dimension with drift from `phi_alpha`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_range_dim_with_drift(
    alpha: f64,
    d: usize,
    phi_alpha: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::range_dim_with_drift(alpha, d, phi_alpha), out)
}

/// A priori interval for the Euclidean dimension from `phi_alpha`.
///
/// # Safety
/// `lo_out` and `hi_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn parafrac_apriori_dim_bounds(
    alpha: f64,
    d: usize,
    phi_alpha: f64,
    lo_out: *mut f64,
    hi_out: *mut f64,
) -> ParafracStatus {
    if lo_out.is_null() || hi_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    match formulas::apriori_dim_bounds(alpha, d, phi_alpha) {
        Ok(r) => {
            let (lo, hi) = r.value.bounds();
            unsafe {
                *lo_out = lo;
                *hi_out = hi;
            }
            ParafracStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Hoelder upper bound on the parabolic graph dimension of a drift.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_holder_phi_upper(
    alpha: f64,
    d: usize,
    dim_t: f64,
    holder_beta: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(
        formulas::holder_phi_upper(alpha, d, dim_t, holder_beta),
        out,
    )
}

/// Parabolic graph dimension of fractional Brownian motion: `dim_T / H`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parafrac_fbm_graph_phi(
    hurst: f64,
    dim_t: f64,
    out: *mut f64,
) -> ParafracStatus {
    if out.is_null() {
        return ParafracStatus::NullPointer;
    }
    write_point(formulas::fbm_graph_phi(hurst, dim_t), out)
}

unsafe fn kernel_query(
    alpha: f64,
    d: usize,
    beta: f64,
    tau: f64,
    delta: *const f64,
    n_mc: usize,
) -> Option<KernelQuery> {
    if delta.is_null() || d == 0 {
        return None;
    }
    let delta = unsafe { std::slice::from_raw_parts(delta, d) }.to_vec();
    Some(KernelQuery {
        alpha,
        d,
        beta,
        tau,
        delta,
        n_mc,
    })
}

/// Monte Carlo estimate of the graph difference kernel
/// `E ||(tau, sign(tau) X_|tau| + delta)||^-beta`.
///
/// # Safety
/// `delta` must point to `d` doubles; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn parafrac_kernel_k(
    alpha: f64,
    d: usize,
    beta: f64,
    tau: f64,
    delta: *const f64,
    n_mc: usize,
    seed: u64,
    mean_out: *mut f64,
    stderr_out: *mut f64,
    clip_rate_out: *mut f64,
) -> ParafracStatus {
    if mean_out.is_null() || stderr_out.is_null() || clip_rate_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    let query = match unsafe { kernel_query(alpha, d, beta, tau, delta, n_mc) } {
        Some(q) => q,
        None => return ParafracStatus::NullPointer,
    };
    guarded(|| match kernel_k(&query, seed) {
        Ok(est) => {
            unsafe {
                *mean_out = est.mean;
                *stderr_out = est.stderr;
                *clip_rate_out = est.clip_rate;
            }
            ParafracStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Monte Carlo estimate of the range difference kernel
/// `E ||sign(tau) X_|tau| + delta||^-beta` (requires `beta < d`).
///
/// # Safety
/// As for [`parafrac_kernel_k`].
#[no_mangle]
pub unsafe extern "C" fn parafrac_kernel_kappa(
    alpha: f64,
    d: usize,
    beta: f64,
    tau: f64,
    delta: *const f64,
    n_mc: usize,
    seed: u64,
    mean_out: *mut f64,
    stderr_out: *mut f64,
    clip_rate_out: *mut f64,
) -> ParafracStatus {
    if mean_out.is_null() || stderr_out.is_null() || clip_rate_out.is_null() {
        return ParafracStatus::NullPointer;
    }
    let query = match unsafe { kernel_query(alpha, d, beta, tau, delta, n_mc) } {
        Some(q) => q,
        None => return ParafracStatus::NullPointer,
    };
    guarded(|| match kernel_kappa(&query, seed) {
        Ok(est) => {
            unsafe {
                *mean_out = est.mean;
                *stderr_out = est.stderr;
                *clip_rate_out = est.clip_rate;
            }
            ParafracStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}
