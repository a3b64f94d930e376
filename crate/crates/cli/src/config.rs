use std::path::PathBuf;

use mipt_qfi_core::{FitWindow, InitialState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Spectrum(SpectrumConfig),
    WitnessScaling(WitnessConfig),
    QuenchSeries(QuenchConfig),
    FbarSweep(FbarConfig),
    CriticalExponent(CriticalConfig),
    OracleCheck(OracleConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    Spectrum,
    WitnessScaling,
    QuenchSeries,
    FbarSweep,
    CriticalExponent,
    OracleCheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum => "spectrum",
            Experiment::WitnessScaling => "witness-scaling",
            Experiment::QuenchSeries => "quench-series",
            Experiment::FbarSweep => "fbar-sweep",
            Experiment::CriticalExponent => "critical-exponent",
            Experiment::OracleCheck => "oracle-check",
        }
    }

    pub fn default_config(self) -> ExperimentConfig {
        match self {
            Experiment::Spectrum => ExperimentConfig::Spectrum(Default::default()),
            Experiment::WitnessScaling => ExperimentConfig::WitnessScaling(Default::default()),
            Experiment::QuenchSeries => ExperimentConfig::QuenchSeries(Default::default()),
            Experiment::FbarSweep => ExperimentConfig::FbarSweep(Default::default()),
            Experiment::CriticalExponent => ExperimentConfig::CriticalExponent(Default::default()),
            Experiment::OracleCheck => ExperimentConfig::OracleCheck(Default::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub n_sites: usize,
    pub h: f64,
    pub gamma: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { n_sites: 64, h: 0.3, gamma: 2.0, output_path: None }
    }
}

/// Open chain evolved for `t` in steps of `dt`, one `gamma` per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessConfig {
    pub h: f64,
    pub gamma: f64,
    pub sizes: Vec<usize>,
    pub t: f64,
    pub dt: f64,
    pub initial: InitialState,
    pub expected_exponent: Option<f64>,
    pub exponent_tolerance: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            h: 0.0,
            gamma: 0.75,
            sizes: vec![16, 24, 32, 48, 64, 96, 128],
            t: 10.0,
            dt: 0.05,
            initial: InitialState::Vacuum,
            expected_exponent: None,
            exponent_tolerance: 0.15,
            output_path: None,
        }
    }
}

/// Quench from the Hermitian ground state. Without `times`, `points` equally spaced samples
/// up to `t_max` (default `4 / gamma`) are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuenchConfig {
    pub n_sites: usize,
    pub h: f64,
    pub gamma: f64,
    pub t_max: Option<f64>,
    pub points: usize,
    pub times: Option<Vec<f64>>,
    pub fit_window: FitWindow,
    /// Expected rate in units of `gamma`, e.g. 2.
    pub expected_rate_over_gamma: Option<f64>,
    pub rate_tolerance: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for QuenchConfig {
    fn default() -> Self {
        QuenchConfig {
            n_sites: 64,
            h: 0.3,
            gamma: 2.0,
            t_max: None,
            points: 80,
            times: None,
            fit_window: FitWindow::default(),
            expected_rate_over_gamma: None,
            rate_tolerance: 0.1,
            output_path: None,
        }
    }
}

impl QuenchConfig {
    pub fn time_grid(&self) -> Vec<f64> {
        if let Some(ts) = &self.times {
            return ts.clone();
        }
        let t_max = self.t_max.unwrap_or(4.0 / self.gamma);
        (1..=self.points).map(|i| t_max * i as f64 / self.points as f64).collect()
    }
}

/// Without `gammas`, `points_per_side` values on each side of `gamma_c`, geometric in the
/// distance from `delta_min` to `span`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FbarConfig {
    pub h: f64,
    pub n_sites: usize,
    pub gammas: Option<Vec<f64>>,
    pub span: f64,
    pub delta_min: f64,
    pub points_per_side: usize,
    /// Distance from `gamma_c` of the two flank points compared for asymmetry.
    pub flank: f64,
    pub min_asymmetry: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for FbarConfig {
    fn default() -> Self {
        FbarConfig {
            h: 0.6,
            n_sites: 256,
            gammas: None,
            span: 1.6,
            delta_min: 1e-3,
            points_per_side: 40,
            flank: 0.4,
            min_asymmetry: 0.2,
            output_path: None,
        }
    }
}

pub fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

impl FbarConfig {
    pub fn gamma_grid(&self, gamma_c: f64) -> Vec<f64> {
        if let Some(g) = &self.gammas {
            return g.clone();
        }
        let d = geometric(self.delta_min, self.span, self.points_per_side);
        let mut g: Vec<f64> = d.iter().rev().map(|x| gamma_c - x).collect();
        g.extend(d.iter().map(|x| gamma_c + x));
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalConfig {
    pub h: f64,
    pub ln_delta_min: f64,
    pub ln_delta_max: f64,
    pub points_per_side: usize,
    pub expected_above: f64,
    pub expected_below: f64,
    pub slope_tolerance: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for CriticalConfig {
    fn default() -> Self {
        CriticalConfig {
            h: 0.6,
            ln_delta_min: -6.0,
            ln_delta_max: -2.0,
            points_per_side: 40,
            expected_above: -3.0,
            expected_below: -2.0,
            slope_tolerance: 0.3,
            output_path: None,
        }
    }
}

impl CriticalConfig {
    pub fn deltas(&self) -> Vec<f64> {
        geometric(self.ln_delta_min.exp(), self.ln_delta_max.exp(), self.points_per_side)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub quench_sizes: Vec<usize>,
    pub fields: Vec<f64>,
    pub gammas: Vec<f64>,
    pub times: Vec<f64>,
    pub fd_delta: f64,
    pub quench_tolerance: f64,
    pub oracle_pair_tolerance: f64,
    pub witness_sizes: Vec<usize>,
    pub witness_h: f64,
    pub witness_gammas: Vec<f64>,
    pub witness_times: Vec<f64>,
    pub witness_dt: f64,
    pub witness_tolerance: f64,
    pub parity_tolerance: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            quench_sizes: vec![4, 6, 8],
            fields: vec![0.2, 0.5, 1.3],
            gammas: vec![0.5, 2.0, 4.5],
            times: vec![0.3, 1.0, 3.0],
            fd_delta: 1e-5,
            quench_tolerance: 1e-5,
            oracle_pair_tolerance: 1e-6,
            witness_sizes: vec![4, 6, 8, 10],
            witness_h: 0.0,
            witness_gammas: vec![0.75, 4.5],
            witness_times: vec![0.5, 2.0, 5.0],
            witness_dt: 0.05,
            witness_tolerance: 1e-6,
            parity_tolerance: 1e-10,
            output_path: None,
        }
    }
}

fn bad<T>(field: &str, msg: impl std::fmt::Display) -> Result<T, CliError> {
    Err(CliError::Config(format!("{field}: {msg}")))
}

fn increasing<T: PartialOrd + Copy>(field: &str, v: &[T]) -> Result<(), CliError> {
    if v.is_empty() {
        return bad(field, "must not be empty");
    }
    if v.windows(2).any(|w| !(w[0] < w[1])) {
        return bad(field, "must be strictly increasing");
    }
    Ok(())
}

fn finite(field: &str, x: f64) -> Result<(), CliError> {
    if !x.is_finite() {
        return bad(field, format!("must be finite, got {x}"));
    }
    Ok(())
}

fn positive(field: &str, x: f64) -> Result<(), CliError> {
    if !(x.is_finite() && x > 0.0) {
        return bad(field, format!("must be finite and > 0, got {x}"));
    }
    Ok(())
}

fn chain_size(field: &str, n: usize, max: usize) -> Result<(), CliError> {
    if n < 4 || n % 2 != 0 || n > max {
        return bad(field, format!("chain size must be even, >= 4 and <= {max}, got {n}"));
    }
    Ok(())
}

fn window_fraction(field: &str, w: &FitWindow) -> Result<(), CliError> {
    let f = match *w {
        FitWindow::LastFraction { fraction } => fraction,
        FitWindow::Stabilized { fraction, rel_tol, run } => {
            positive(&format!("{field}.rel_tol"), rel_tol)?;
            if run == 0 {
                return bad(&format!("{field}.run"), "must be >= 1");
            }
            fraction
        }
    };
    if !(f > 0.0 && f <= 1.0) {
        return bad(&format!("{field}.fraction"), format!("must lie in (0, 1], got {f}"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn experiment(&self) -> Experiment {
        match self {
            ExperimentConfig::Spectrum(_) => Experiment::Spectrum,
            ExperimentConfig::WitnessScaling(_) => Experiment::WitnessScaling,
            ExperimentConfig::QuenchSeries(_) => Experiment::QuenchSeries,
            ExperimentConfig::FbarSweep(_) => Experiment::FbarSweep,
            ExperimentConfig::CriticalExponent(_) => Experiment::CriticalExponent,
            ExperimentConfig::OracleCheck(_) => Experiment::OracleCheck,
        }
    }

    pub fn output_path(&self) -> Option<&PathBuf> {
        match self {
            ExperimentConfig::Spectrum(c) => c.output_path.as_ref(),
            ExperimentConfig::WitnessScaling(c) => c.output_path.as_ref(),
            ExperimentConfig::QuenchSeries(c) => c.output_path.as_ref(),
            ExperimentConfig::FbarSweep(c) => c.output_path.as_ref(),
            ExperimentConfig::CriticalExponent(c) => c.output_path.as_ref(),
            ExperimentConfig::OracleCheck(c) => c.output_path.as_ref(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            ExperimentConfig::Spectrum(c) => {
                chain_size("n_sites", c.n_sites, usize::MAX)?;
                finite("h", c.h)?;
                if !(c.gamma >= 0.0 && c.gamma.is_finite()) {
                    return bad("gamma", "must be finite and >= 0");
                }
            }
            ExperimentConfig::WitnessScaling(c) => {
                increasing("sizes", &c.sizes)?;
                for &n in &c.sizes {
                    chain_size("sizes", n, usize::MAX)?;
                }
                if c.sizes.len() < 3 {
                    return bad("sizes", "need at least 3 sizes for the exponent fit");
                }
                finite("h", c.h)?;
                positive("gamma", c.gamma)?;
                positive("t", c.t)?;
                positive("dt", c.dt)?;
                let steps = (c.t / c.dt).round();
                if (steps * c.dt - c.t).abs() > 1e-9 * c.t {
                    return bad("t", format!("must be a whole number of dt steps, got t={} dt={}", c.t, c.dt));
                }
                if let InitialState::HermitianGround { h, .. } = c.initial {
                    finite("initial.h", h)?;
                }
                positive("exponent_tolerance", c.exponent_tolerance)?;
            }
            ExperimentConfig::QuenchSeries(c) => {
                chain_size("n_sites", c.n_sites, usize::MAX)?;
                finite("h", c.h)?;
                if c.times.is_none() {
                    if c.t_max.is_none() {
                        positive("gamma", c.gamma)?;
                    } else {
                        positive("t_max", c.t_max.unwrap_or_default())?;
                    }
                    if c.points < 3 {
                        return bad("points", "need at least 3 samples");
                    }
                }
                if !(c.gamma >= 0.0 && c.gamma.is_finite()) {
                    return bad("gamma", "must be finite and >= 0");
                }
                let ts = c.time_grid();
                increasing("times", &ts)?;
                if !(ts[0] > 0.0 && ts.iter().all(|t| t.is_finite())) {
                    return bad("times", "must be finite and > 0");
                }
                window_fraction("fit_window", &c.fit_window)?;
                let n_fit = match c.fit_window {
                    FitWindow::LastFraction { fraction } | FitWindow::Stabilized { fraction, .. } => {
                        ((ts.len() as f64) * fraction).ceil() as usize
                    }
                };
                if n_fit < 3 {
                    return bad("fit_window", format!("covers {n_fit} of {} samples; need at least 3", ts.len()));
                }
                positive("rate_tolerance", c.rate_tolerance)?;
            }
            ExperimentConfig::FbarSweep(c) => {
                chain_size("n_sites", c.n_sites, usize::MAX)?;
                if !(c.h.abs() < 1.0) {
                    return bad("h", "gamma_c exists only for |h| < 1");
                }
                if let Some(g) = &c.gammas {
                    increasing("gammas", g)?;
                    if g.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
                        return bad("gammas", "must be finite and >= 0");
                    }
                } else {
                    positive("delta_min", c.delta_min)?;
                    positive("span", c.span)?;
                    if !(c.delta_min < c.span) {
                        return bad("delta_min", "must be below span");
                    }
                    if c.points_per_side < 2 {
                        return bad("points_per_side", "must be >= 2");
                    }
                }
                positive("flank", c.flank)?;
                positive("min_asymmetry", c.min_asymmetry)?;
            }
            ExperimentConfig::CriticalExponent(c) => {
                if !(c.h.abs() < 1.0) {
                    return bad("h", "gamma_c exists only for |h| < 1");
                }
                finite("ln_delta_min", c.ln_delta_min)?;
                finite("ln_delta_max", c.ln_delta_max)?;
                if !(c.ln_delta_min < c.ln_delta_max) {
                    return bad("ln_delta_min", "must be below ln_delta_max");
                }
                if c.points_per_side < 3 {
                    return bad("points_per_side", "need at least 3 samples per side");
                }
                finite("expected_above", c.expected_above)?;
                finite("expected_below", c.expected_below)?;
                positive("slope_tolerance", c.slope_tolerance)?;
            }
            ExperimentConfig::OracleCheck(c) => {
                increasing("quench_sizes", &c.quench_sizes)?;
                for &n in &c.quench_sizes {
                    chain_size("quench_sizes", n, mipt_qfi_oracle::QUADRATURE_CAP)?;
                }
                increasing("fields", &c.fields)?;
                increasing("gammas", &c.gammas)?;
                increasing("times", &c.times)?;
                for (f, v) in [("fields", &c.fields), ("gammas", &c.gammas), ("times", &c.times)] {
                    if v.iter().any(|x| !x.is_finite()) {
                        return bad(f, "must be finite");
                    }
                }
                if c.gammas[0] < 0.0 || c.times[0] < 0.0 {
                    return bad("gammas", "gammas and times must be >= 0");
                }
                positive("fd_delta", c.fd_delta)?;
                positive("quench_tolerance", c.quench_tolerance)?;
                positive("oracle_pair_tolerance", c.oracle_pair_tolerance)?;
                increasing("witness_sizes", &c.witness_sizes)?;
                for &n in &c.witness_sizes {
                    chain_size("witness_sizes", n, mipt_qfi_oracle::DENSE_CAP)?;
                }
                finite("witness_h", c.witness_h)?;
                increasing("witness_gammas", &c.witness_gammas)?;
                increasing("witness_times", &c.witness_times)?;
                positive("witness_dt", c.witness_dt)?;
                for &t in &c.witness_times {
                    let steps = (t / c.witness_dt).round();
                    if !(t >= 0.0) || (steps * c.witness_dt - t).abs() > 1e-9 * t.max(1.0) {
                        return bad("witness_times", format!("{t} is not a whole number of witness_dt steps"));
                    }
                }
                if c.witness_gammas[0] < 0.0 {
                    return bad("witness_gammas", "must be >= 0");
                }
                positive("witness_tolerance", c.witness_tolerance)?;
                positive("parity_tolerance", c.parity_tolerance)?;
            }
        }
        Ok(())
    }
}
