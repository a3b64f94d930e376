use mipt_qfi_core::FitResult;
use serde::Serialize;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bound {
    Within { target: f64, tolerance: f64 },
    AtMost { max: f64 },
    AtLeast { min: f64 },
}

impl Bound {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::Within { target, tolerance } => (v - target).abs() <= tolerance,
            Bound::AtMost { max } => v <= max,
            Bound::AtLeast { min } => v >= min,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, bound: Bound) -> Self {
        Check { name: name.into(), value, passed: bound.holds(value), bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedFit {
    pub name: String,
    #[serde(flatten)]
    pub fit: FitResult,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Results {
    pub fits: Vec<NamedFit>,
    pub checks: Vec<Check>,
}

impl Results {
    pub fn fit(&self, name: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.name == name).map(|f| &f.fit)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub cli: &'static str,
    pub core: &'static str,
    pub oracle: &'static str,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            cli: env!("CARGO_PKG_VERSION"),
            core: mipt_qfi_core::VERSION,
            oracle: mipt_qfi_oracle::VERSION,
        }
    }
}

/// Everything an experiment produces; wall time lives in a separate sidecar so the summary
/// stays byte-identical across reruns.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: ExperimentConfig,
    pub header: &'static str,
    pub rows: Vec<String>,
    pub results: Results,
}

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a ExperimentConfig,
    results: &'a Results,
    versions: Versions,
}

impl Outcome {
    pub fn csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    pub fn summary_json(&self) -> String {
        let s = Summary { config: &self.config, results: &self.results, versions: Versions::default() };
        let mut text = serde_json::to_string_pretty(&s).expect("summary serializes");
        text.push('\n');
        text
    }
}
