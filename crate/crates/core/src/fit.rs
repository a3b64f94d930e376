//! Log-linear least squares for power-law exponents and exponential rates.

use serde::{Deserialize, Serialize};

use crate::error::{QfiError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent_or_rate: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// Indices of the samples used.
    pub window: Vec<usize>,
}

fn fit_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(QfiError::Fit(msg.into()))
}

fn least_squares(xs: &[f64], ys: &[f64], window: Vec<usize>) -> Result<FitResult> {
    if window.len() < 3 {
        return fit_err(format!("need at least 3 samples, got {}", window.len()));
    }
    let n = window.len() as f64;
    let mx = window.iter().map(|&i| xs[i]).sum::<f64>() / n;
    let my = window.iter().map(|&i| ys[i]).sum::<f64>() / n;
    let sxx: f64 = window.iter().map(|&i| (xs[i] - mx).powi(2)).sum();
    let sxy: f64 = window.iter().map(|&i| (xs[i] - mx) * (ys[i] - my)).sum();
    if sxx == 0.0 {
        return fit_err("abscissae are all equal");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = window
        .iter()
        .map(|&i| (ys[i] - intercept - slope * xs[i]).powi(2))
        .sum();
    Ok(FitResult { exponent_or_rate: slope, intercept, residual: (rss / n).sqrt(), window })
}

/// Least-squares line through `(ln x, ln y)`; the exponent is the slope.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return fit_err("xs and ys differ in length");
    }
    if xs.iter().chain(ys).any(|v| !(v.is_finite() && *v > 0.0)) {
        return fit_err("power-law fit needs finite positive data");
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    least_squares(&lx, &ly, (0..xs.len()).collect())
}

/// Which samples enter an exponential-rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FitWindow {
    /// The last `fraction` of the samples.
    LastFraction { fraction: f64 },
    /// Starts where the local slope of `ln F` stays within `rel_tol` over `run` consecutive
    /// samples; never shorter than the last `fraction`.
    Stabilized { rel_tol: f64, run: usize, fraction: f64 },
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow::Stabilized { rel_tol: 0.05, run: 3, fraction: 0.3 }
    }
}

fn tail_start(n: usize, fraction: f64) -> usize {
    let len = ((n as f64) * fraction).ceil() as usize;
    n - len.clamp(1, n)
}

impl FitWindow {
    pub fn select(&self, ts: &[f64], log_f: &[f64]) -> Vec<usize> {
        let n = ts.len();
        match *self {
            FitWindow::LastFraction { fraction } => (tail_start(n, fraction)..n).collect(),
            FitWindow::Stabilized { rel_tol, run, fraction } => {
                let tail = tail_start(n, fraction);
                let slopes: Vec<f64> = (1..n)
                    .map(|i| (log_f[i] - log_f[i - 1]) / (ts[i] - ts[i - 1]))
                    .collect();
                let stable = (0..slopes.len().saturating_sub(run.max(1) - 1)).find(|&i| {
                    let w = &slopes[i..i + run.max(1)];
                    let m = w.iter().sum::<f64>() / w.len() as f64;
                    m > 0.0 && w.iter().all(|s| (s - m).abs() <= rel_tol * m.abs())
                });
                // slope i joins samples i and i+1
                let start = stable.map_or(tail, |i| i.min(tail));
                (start..n).collect()
            }
        }
    }
}

/// Least-squares line through `(t, ln F)` over the selected window; the rate is the slope.
pub fn fit_exponential_rate(ts: &[f64], fs: &[f64], window: FitWindow) -> Result<FitResult> {
    if ts.len() != fs.len() {
        return fit_err("ts and Fs differ in length");
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return fit_err("times must be strictly increasing");
    }
    match window {
        FitWindow::LastFraction { fraction } | FitWindow::Stabilized { fraction, .. }
            if !(fraction > 0.0 && fraction <= 1.0) =>
        {
            return fit_err(format!("window fraction must be in (0, 1], got {fraction}"));
        }
        _ => {}
    }
    let log_f: Vec<f64> = fs.iter().map(|f| if *f > 0.0 { f.ln() } else { f64::NAN }).collect();
    let idx = window.select(ts, &log_f);
    if idx.iter().any(|&i| !(fs[i].is_finite() && fs[i] > 0.0)) {
        return fit_err("F must be finite and positive inside the fit window");
    }
    least_squares(ts, &log_f, idx)
}
