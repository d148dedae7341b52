//! Deterministic SVG rendering of scaling ledgers and energy reports.
//! Fixed 800x600 viewBox, fixed float formatting: identical input bytes
//! produce identical output bytes.

use std::fmt::Write as _;

use crate::cover::{DimEstimate, ScalingLedger};
use crate::energy::EnergyReport;
use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

fn svg_open(out: &mut String) {
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" \
         width=\"800\" height=\"600\">\n",
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n");
}

fn f(v: f64) -> String {
    format!("{v:.6}")
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn new(xs: &[f64], ys: &[f64]) -> Frame {
        let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in xs {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
        }
        for &y in ys {
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
        if x_hi == x_lo {
            x_hi = x_lo + 1.0;
        }
        if y_hi == y_lo {
            y_hi = y_lo + 1.0;
        }
        Frame {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        f(MARGIN),
        f(HEIGHT - MARGIN),
        f(WIDTH - MARGIN),
        f(HEIGHT - MARGIN)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        f(MARGIN),
        f(MARGIN),
        f(MARGIN),
        f(HEIGHT - MARGIN)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        f(WIDTH / 2.0),
        f(HEIGHT - 20.0),
        x_label
    );
    let _ = writeln!(
        out,
        "<text x=\"20\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {})\">{}</text>",
        f(HEIGHT / 2.0),
        f(HEIGHT / 2.0),
        y_label
    );
}

/// Log-log scatter of a ledger with the fitted line and a slope
/// annotation.
pub fn plot_ledger(ledger: &ScalingLedger, estimate: Option<&DimEstimate>) -> Result<String> {
    if ledger.levels.is_empty() {
        return Err(Error::InvalidParameter("empty ledger".into()));
    }
    let xs: Vec<f64> = ledger.levels.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = ledger.counts.iter().map(|&c| (c as f64).log2()).collect();
    let frame = Frame::new(&xs, &ys);
    let mut out = String::new();
    svg_open(&mut out);
    axes(&mut out, "level k (scale 2^-k)", "log2 N_k");
    for (&x, &y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"steelblue\"/>",
            f(frame.px(x)),
            f(frame.py(y))
        );
    }
    if let Some(est) = estimate {
        // The estimate's slope in log2 N per level is value / (alpha v 1).
        let slope = est.value / ledger.alpha.max(1.0);
        let (k0, k1) = (est.window.0 as f64, est.window.1 as f64);
        let i0 = ledger.levels.iter().position(|&k| k as f64 == k0);
        if let Some(i0) = i0 {
            let y0 = ys[i0];
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"crimson\" \
                 stroke-width=\"2\"/>",
                f(frame.px(k0)),
                f(frame.py(y0)),
                f(frame.px(k1)),
                f(frame.py(y0 + slope * (k1 - k0)))
            );
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"16\">slope {:.2}</text>",
            f(MARGIN + 16.0),
            f(MARGIN + 24.0),
            est.value
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Partial-sum curves per exponent: one polyline per energy report over
/// its refinement levels.
pub fn plot_energy(reports: &[EnergyReport]) -> Result<String> {
    if reports.is_empty() || reports.iter().all(|r| r.partial_sums.is_empty()) {
        return Err(Error::InvalidParameter("no energy data to plot".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in reports {
        for (i, &s) in r.partial_sums.iter().enumerate() {
            xs.push(i as f64);
            ys.push(s.ln());
        }
    }
    let frame = Frame::new(&xs, &ys);
    let mut out = String::new();
    svg_open(&mut out);
    axes(&mut out, "refinement level", "ln partial energy");
    let palette = [
        "steelblue",
        "crimson",
        "seagreen",
        "darkorange",
        "purple",
        "teal",
    ];
    for (idx, r) in reports.iter().enumerate() {
        let color = palette[idx % palette.len()];
        let mut points = String::new();
        for (i, &s) in r.partial_sums.iter().enumerate() {
            if i > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{},{}", f(frame.px(i as f64)), f(frame.py(s.ln())));
        }
        let _ = writeln!(
            out,
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>"
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">beta {} ({})</text>",
            f(WIDTH - MARGIN + 4.0),
            f(MARGIN + 16.0 * idx as f64),
            r.beta,
            r.verdict.as_str()
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
