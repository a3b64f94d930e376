//! Ising ground state in pair form and exact per-mode non-Hermitian evolution.

use crate::error::{invalid, Result};
use crate::mat2::{norm_sqr, sinc, Mat2, Vec2, C64, I};
use crate::spectral::{momentum_grid, Boundary, Mode, ModelParams};

/// Amplitudes of one momentum pair: `(u c†_k c†_{-k} + v)|0>`.
///
/// `u` multiplies the occupied pair, `v` the pair vacuum; this is the ordering in which
/// `i d/dt (u, v) = M_k (u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAmplitude {
    pub k: f64,
    pub u: C64,
    pub v: C64,
}

impl PairAmplitude {
    pub fn vector(&self) -> Vec2 {
        [self.u, self.v]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.vector())
    }

    /// Probability that the pair `(k, -k)` is occupied.
    pub fn pair_occupation(&self) -> f64 {
        self.u.norm_sqr() / self.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovAmplitudes {
    pub modes: Vec<PairAmplitude>,
}

impl BogoliubovAmplitudes {
    pub fn normalized(&self) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let n = m.norm_sqr().sqrt();
                PairAmplitude { k: m.k, u: m.u / n, v: m.v / n }
            })
            .collect();
        BogoliubovAmplitudes { modes }
    }

    /// Site-averaged density `<n_i>` of the normalized state.
    pub fn mean_density(&self) -> f64 {
        let n_sites = 2 * self.modes.len();
        2.0 * self.modes.iter().map(|m| m.pair_occupation()).sum::<f64>() / n_sites as f64
    }
}

/// Eigenvector of `M` for eigenvalue `lambda`, unit norm, from whichever row is better conditioned.
pub fn eigenvector(mode: &Mode, lambda: C64) -> Vec2 {
    let a = mode.alpha;
    let b = C64::new(mode.beta, 0.0);
    let r1 = [b, lambda - a];
    let r2 = [a + lambda, b];
    unit(if norm_sqr(&r1) >= norm_sqr(&r2) { r1 } else { r2 })
}

/// Normalized long-time state of a mode: the eigenvector of the branch `-eps` (larger imaginary part).
pub fn dominant_eigenvector(mode: &Mode, eps: C64) -> Vec2 {
    eigenvector(mode, -eps)
}

/// `exp(-i M t) = cos(eps t) I - i t sinc(eps t) M`.
///
/// Both factors are even in `eps`, so the expression is entire in `eps^2` and stays exact at
/// the exceptional point, where it reduces to `I - i M t`.
pub fn propagator(mode: &Mode, eps: C64, t: f64) -> Mat2 {
    let x = eps * t;
    let c = x.cos();
    let s = sinc(x) * t;
    Mat2::identity().scale(c) - mode.matrix().scale(I * s)
}

/// Ground state of the Hermitian chain (`gamma` ignored) on the antiperiodic grid.
pub fn ising_ground_amplitudes(params: &ModelParams) -> Result<BogoliubovAmplitudes> {
    params.validate()?;
    if params.boundary != Boundary::PeriodicSpin {
        return invalid("ising_ground_amplitudes needs the periodic-spin boundary");
    }
    let modes = momentum_grid(params.n_sites)?
        .into_iter()
        .map(|k| {
            let mode = Mode::new(k, params.h, 0.0);
            let a = mode.alpha.re;
            let b = mode.beta;
            let e = a.hypot(b);
            // eigenvector for -e; pick the cancellation-free form
            let (u, v) = if a <= 0.0 { (e - a, -b) } else { (b, -(a + e)) };
            let n = u.hypot(v);
            PairAmplitude { k, u: C64::new(u / n, 0.0), v: C64::new(v / n, 0.0) }
        })
        .collect();
    Ok(BogoliubovAmplitudes { modes })
}

/// Applies `exp(-i M_k t)` to every mode. The result is not normalized.
pub fn evolve_amplitudes(
    amps: &BogoliubovAmplitudes,
    params: &ModelParams,
    t: f64,
) -> Result<BogoliubovAmplitudes> {
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("evolution time must be finite and >= 0, got {t}"));
    }
    let modes = amps
        .modes
        .iter()
        .map(|m| {
            let mode = Mode::new(m.k, params.h, params.gamma);
            let p = propagator(&mode, mode.spectrum().epsilon, t);
            let [u, v] = p.apply(&m.vector());
            PairAmplitude { k: m.k, u, v }
        })
        .collect();
    Ok(BogoliubovAmplitudes { modes })
}

pub(crate) fn unit(v: Vec2) -> Vec2 {
    let n = norm_sqr(&v).sqrt();
    [v[0] / n, v[1] / n]
}
