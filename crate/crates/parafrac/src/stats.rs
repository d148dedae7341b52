//! Small statistical utilities shared by the samplers and estimators:
//! ordinary least squares on log-log data, Kolmogorov-Smirnov distances,
//! empirical quantiles and a survival-slope fit for tail checks.

use crate::error::{Error, Result};

/// Ordinary least-squares line fit.
#[derive(Debug, Clone, Copy)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 when the fit is exact or has no
    /// residual degrees of freedom).
    pub slope_stderr: f64,
}

/// Fit `y = intercept + slope * x` by least squares.
pub fn ols(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "ols needs >= 2 paired points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("ols regressor is constant".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let dof = x.len() as f64 - 2.0;
    let slope_stderr = if dof > 0.0 {
        let ss_res: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let r = yi - (intercept + slope * xi);
                r * r
            })
            .sum();
        (ss_res / dof / sxx).sqrt()
    } else {
        0.0
    };
    Ok(OlsFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("ks needs non-empty samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // Advance past the smallest head value in both samples so ties
        // are consumed together.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Critical value for the two-sample KS test at significance `level`,
/// using the asymptotic c(level) * sqrt((n+m)/(n*m)) form.
pub fn ks_two_sample_critical(n: usize, m: usize, level: f64) -> f64 {
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// One-sample KS statistic against a reference CDF.
pub fn ks_vs_cdf<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("ks needs non-empty sample".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// Empirical quantile of an unsorted sample (linear interpolation).
pub fn quantile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InsufficientData("quantile of empty sample".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "quantile q={q} outside [0,1]"
        )));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Ok(s[lo] * (1.0 - frac) + s[hi] * frac)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Log-log slope of the empirical survival function over `[r_lo, r_hi]`
/// evaluated on `n_grid` geometrically spaced radii.
pub fn survival_slope(norms: &[f64], r_lo: f64, r_hi: f64, n_grid: usize) -> Result<OlsFit> {
    if !(r_lo > 0.0 && r_hi > r_lo && n_grid >= 2) {
        return Err(Error::InvalidParameter(
            "survival_slope needs 0 < r_lo < r_hi and >= 2 grid points".into(),
        ));
    }
    let mut sorted = norms.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut xs = Vec::with_capacity(n_grid);
    let mut ys = Vec::with_capacity(n_grid);
    for i in 0..n_grid {
        let t = i as f64 / (n_grid - 1) as f64;
        let r = r_lo * (r_hi / r_lo).powf(t);
        let idx = sorted.partition_point(|&v| v <= r);
        let surv = (sorted.len() - idx) as f64 / n;
        if surv > 0.0 {
            xs.push(r.ln());
            ys.push(surv.ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData(
            "survival function vanished on the requested radius grid".into(),
        ));
    }
    ols(&xs, &ys)
}
