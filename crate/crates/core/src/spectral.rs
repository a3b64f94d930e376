//! Momentum grid, per-mode BdG matrices and the critical geometry.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, QfiError, Result};
use crate::mat2::{Mat2, C64};

/// Boundary condition of the spin chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Periodic spin chain; the even-parity sector maps to antiperiodic fermions.
    PeriodicSpin,
    Open,
}

/// Chain size, transverse field, measurement rate and boundary.
///
/// The Ising coupling is fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_sites: usize,
    pub h: f64,
    pub gamma: f64,
    pub boundary: Boundary,
}

impl ModelParams {
    pub fn new(n_sites: usize, h: f64, gamma: f64, boundary: Boundary) -> Result<Self> {
        let p = ModelParams { n_sites, h, gamma, boundary };
        p.validate()?;
        Ok(p)
    }

    pub fn periodic(n_sites: usize, h: f64, gamma: f64) -> Result<Self> {
        Self::new(n_sites, h, gamma, Boundary::PeriodicSpin)
    }

    pub fn open(n_sites: usize, h: f64, gamma: f64) -> Result<Self> {
        Self::new(n_sites, h, gamma, Boundary::Open)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 4 || self.n_sites % 2 != 0 {
            return invalid(format!("n_sites must be even and >= 4, got {}", self.n_sites));
        }
        if !self.h.is_finite() {
            return invalid("h must be finite");
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return invalid(format!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        Ok(())
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        ModelParams { gamma, ..*self }
    }
}

/// Entries of `M_k = [[alpha, beta], [beta, -alpha]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: f64,
    pub alpha: C64,
    pub beta: f64,
}

impl Mode {
    pub fn new(k: f64, h: f64, gamma: f64) -> Self {
        Mode {
            k,
            alpha: C64::new(-2.0 * k.cos() - 2.0 * h, -gamma / 2.0),
            beta: 2.0 * k.sin(),
        }
    }

    /// The mode at `k_c = arccos(-h)`, with `Re(alpha) = 0` imposed exactly.
    pub fn critical(h: f64, gamma: f64) -> Result<Self> {
        if !(h.abs() < 1.0) {
            return Err(QfiError::NoCriticalPoint("critical mode", h));
        }
        Ok(Mode {
            k: critical_momentum(h)?,
            alpha: C64::new(0.0, -gamma / 2.0),
            beta: 2.0 * (1.0 - h * h).sqrt(),
        })
    }

    pub fn matrix(&self) -> Mat2 {
        let b = C64::new(self.beta, 0.0);
        Mat2::new(self.alpha, b, b, -self.alpha)
    }

    pub fn spectrum(&self) -> ModeSpectrum {
        ModeSpectrum::from_square(self.alpha * self.alpha + self.beta * self.beta)
    }

    /// `||M_k||_max`, the scale used for exceptional-point detection.
    pub fn scale(&self) -> f64 {
        self.alpha.norm().max(self.beta.abs())
    }
}

/// Ground-branch eigenvalue `epsilon = E + i Gamma` of a mode; the excited branch is `-epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpectrum {
    pub epsilon: C64,
    pub energy: f64,
    /// Imaginary part of `epsilon`; never positive.
    pub decay: f64,
}

impl ModeSpectrum {
    fn from_square(eps2: C64) -> Self {
        let mut e = eps2.sqrt();
        let tol = 1e-13 * e.norm();
        if e.im.abs() <= tol {
            // real pair: take the Hermitian-limit ground branch
            if e.re > 0.0 {
                e = -e;
            }
            if e.im > 0.0 {
                e.im = 0.0;
            }
        } else if e.im > 0.0 {
            e = -e;
        }
        ModeSpectrum { epsilon: e, energy: e.re, decay: e.im }
    }
}

/// `k_n = (2n - 1) pi / N` for `n = 1..N/2`.
pub fn momentum_grid(n_sites: usize) -> Result<Vec<f64>> {
    if n_sites < 2 || n_sites % 2 != 0 {
        return invalid(format!("momentum grid needs an even positive size, got {n_sites}"));
    }
    let n = n_sites as f64;
    Ok((1..=n_sites / 2).map(|j| (2 * j - 1) as f64 * PI / n).collect())
}

pub fn mode_system(params: &ModelParams, k: f64) -> (Mode, ModeSpectrum) {
    let mode = Mode::new(k, params.h, params.gamma);
    let spec = mode.spectrum();
    (mode, spec)
}

/// All grid modes of `params` in ascending `k`.
pub fn grid_modes(params: &ModelParams) -> Result<Vec<(Mode, ModeSpectrum)>> {
    params.validate()?;
    Ok(momentum_grid(params.n_sites)?
        .into_iter()
        .map(|k| mode_system(params, k))
        .collect())
}

pub fn critical_gamma(h: f64) -> Result<f64> {
    if !(h.abs() < 1.0) {
        return Err(QfiError::NoCriticalPoint("critical_gamma", h));
    }
    Ok(4.0 * (1.0 - h * h).sqrt())
}

pub fn critical_momentum(h: f64) -> Result<f64> {
    if !(h.abs() < 1.0) {
        return Err(QfiError::NoCriticalPoint("critical_momentum", h));
    }
    Ok((-h).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapCharacter {
    RealGapped,
    Critical,
    ImaginaryGapped,
}

/// Relative distance to `gamma_c` below which a point counts as critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

pub fn gap_character(params: &ModelParams) -> Result<GapCharacter> {
    let gc = critical_gamma(params.h)?;
    let d = params.gamma - gc;
    Ok(if d.abs() <= CRITICAL_TOLERANCE * gc {
        GapCharacter::Critical
    } else if d < 0.0 {
        GapCharacter::RealGapped
    } else {
        GapCharacter::ImaginaryGapped
    })
}

/// Largest imaginary part over the grid (`<= 0`).
pub fn max_decay(params: &ModelParams) -> Result<f64> {
    Ok(grid_modes(params)?
        .iter()
        .map(|(_, s)| s.decay)
        .fold(f64::NEG_INFINITY, f64::max))
}
