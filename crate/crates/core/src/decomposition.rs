//! Long-time mode decomposition `sum_k F_k e^{4|Gamma_k| t}`, the auxiliary sum `F-bar`
//! and the critical-mode coefficient.
//!
//! Amplitudes here follow the vacuum-first ordering `(u~, v~) = (vacuum, pair)`, i.e. the
//! swap of the ordering used by [`crate::dynamics`]; see [`printed_bracket`].

use serde::{Deserialize, Serialize};

use crate::dynamics::{dominant_eigenvector, eigenvector};
use crate::error::{QfiError, Result};
use crate::mat2::{swap, Vec2, C64, I};
use crate::spectral::{
    critical_gamma, critical_momentum, gap_character, grid_modes, GapCharacter, Mode, ModelParams,
};

/// Time-independent prefactors of the late-time generator entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeEntries {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthLaw {
    /// Contribution `F_k e^{4 |Gamma_k| t}`.
    Exponential,
    /// Real spectrum: contribution `F_k t^2`.
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeQfiCoefficient {
    pub k: f64,
    pub f_k: f64,
    /// Imaginary part of the ground branch (`<= 0`).
    pub gamma_k: f64,
    pub tilde_entries: TildeEntries,
    /// Long-time state, vacuum amplitude first.
    pub tilde_amplitudes: Vec2,
    pub law: GrowthLaw,
}

impl ModeQfiCoefficient {
    pub fn at(&self, t: f64) -> f64 {
        match self.law {
            GrowthLaw::Exponential => self.f_k * (-4.0 * self.gamma_k * t).exp(),
            GrowthLaw::Quadratic => self.f_k * t * t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub modes: Vec<ModeQfiCoefficient>,
    /// Set at `gamma = 0`, where no mode grows and the decomposition carries no information.
    pub degenerate: bool,
}

impl ModeDecomposition {
    /// `sum_k F_k e^{4 |Gamma_k| t}` (quadratic modes contribute `F_k t^2`).
    pub fn evaluate(&self, t: f64) -> f64 {
        self.modes.iter().map(|m| m.at(t)).sum()
    }

    pub fn max_growth(&self) -> f64 {
        self.modes.iter().map(|m| -m.gamma_k).fold(0.0, f64::max)
    }
}

/// Covariance-like bracket written in the vacuum-first ordering:
///
/// `[|u|^2(|A|^2+|C|^2) - 2 Re(u v* (A* C - A B*)) + |v|^2(|A|^2+|B|^2)] / n
///   - |-A|u|^2 - C u* v - B u v* + A|v|^2|^2 / n^2`, with `n = |u|^2 + |v|^2`.
pub fn printed_bracket(e: &TildeEntries, amp: &Vec2) -> f64 {
    let (a, b, c) = (e.a, e.b, e.c);
    let [u, v] = *amp;
    let n = u.norm_sqr() + v.norm_sqr();
    let first = u.norm_sqr() * (a.norm_sqr() + c.norm_sqr())
        - 2.0 * (u * v.conj() * (a.conj() * c - a * b.conj())).re
        + v.norm_sqr() * (a.norm_sqr() + b.norm_sqr());
    let mean = -a * u.norm_sqr() - c * u.conj() * v - b * u * v.conj() + a * v.norm_sqr();
    first / n - mean.norm_sqr() / (n * n)
}

/// Late-time factorization `R_k(t) ~ (A~, B~, C~) e^{2 i eps t}` on the ground branch.
pub fn exponential_tildes(mode: &Mode, eps: C64) -> TildeEntries {
    let (a, b) = (mode.alpha, mode.beta);
    let d = eps * eps * eps * 4.0;
    TildeEntries {
        a: -I * b * b / d,
        b: I * b * (a - eps) / d,
        c: I * b * (a + eps) / d,
    }
}

/// Coefficients of the part of `R_k(t)` linear in `t` (real spectrum).
pub fn linear_tildes(mode: &Mode, eps: C64) -> TildeEntries {
    let (a, b) = (mode.alpha, mode.beta);
    let e2 = eps * eps;
    TildeEntries { a: a * a / e2, b: a * b / e2, c: a * b / e2 }
}

fn coefficient(mode: &Mode) -> ModeQfiCoefficient {
    let spec = mode.spectrum();
    let eps = spec.epsilon;
    if spec.decay < 0.0 {
        let tilde_entries = exponential_tildes(mode, eps);
        let tilde_amplitudes = swap(&dominant_eigenvector(mode, eps));
        ModeQfiCoefficient {
            k: mode.k,
            f_k: printed_bracket(&tilde_entries, &tilde_amplitudes),
            gamma_k: spec.decay,
            tilde_entries,
            tilde_amplitudes,
            law: GrowthLaw::Exponential,
        }
    } else {
        let tilde_entries = linear_tildes(mode, eps);
        let tilde_amplitudes = swap(&eigenvector(mode, eps));
        ModeQfiCoefficient {
            k: mode.k,
            f_k: printed_bracket(&tilde_entries, &tilde_amplitudes),
            gamma_k: 0.0,
            tilde_entries,
            tilde_amplitudes,
            law: GrowthLaw::Quadratic,
        }
    }
}

pub fn mode_qfi_coefficients(params: &ModelParams) -> Result<ModeDecomposition> {
    let modes: Vec<_> = grid_modes(params)?.iter().map(|(m, _)| coefficient(m)).collect();
    if let Some(bad) = modes.iter().find(|m| !m.f_k.is_finite()) {
        let eps = Mode::new(bad.k, params.h, params.gamma).spectrum().epsilon;
        return Err(QfiError::ExceptionalPoint { k: bad.k, eps_abs: eps.norm() });
    }
    Ok(ModeDecomposition { modes, degenerate: params.gamma == 0.0 })
}

/// Coefficient of the mode at the exact `k_c = arccos(-h)`.
///
/// Above `gamma_c` it multiplies `e^{4|Gamma| t}`; below, it multiplies `t^2`.
pub fn critical_mode_coefficient(h: f64, gamma: f64) -> Result<f64> {
    let gc = critical_gamma(h)?;
    let params = ModelParams { n_sites: 4, h, gamma, boundary: crate::spectral::Boundary::PeriodicSpin };
    params.validate()?;
    if gap_character(&params)? == GapCharacter::Critical {
        return Err(QfiError::DivergentAtCritical { gamma_c: gc });
    }
    let c = coefficient(&Mode::critical(h, gamma)?);
    Ok(c.f_k)
}

/// `F-bar = sum_k F_k` over the grid, plus the exact `k_c` mode when `|h| < 1` and `k_c` is off-grid.
pub fn fbar(params: &ModelParams) -> Result<f64> {
    let dec = mode_qfi_coefficients(params)?;
    let mut total: f64 = dec.modes.iter().map(|m| m.f_k).sum();
    if params.h.abs() < 1.0 {
        let kc = critical_momentum(params.h)?;
        let on_grid = dec.modes.iter().any(|m| (m.k - kc).abs() < 1e-12);
        if !on_grid {
            total += critical_mode_coefficient(params.h, params.gamma)?;
        }
    }
    if !total.is_finite() {
        return Err(QfiError::NonFinite("fbar"));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::propagator;
    use crate::quench::{r_matrix, RMethod};
    use crate::spectral::mode_system;

    #[test]
    fn tildes_are_the_late_time_limit_of_r() {
        for &(h, g, k) in &[(0.3, 2.0, 0.9), (0.6, 4.0, 2.0), (-0.2, 1.0, 0.3)] {
            let p = ModelParams::periodic(8, h, g).unwrap();
            let (m, s) = mode_system(&p, k);
            let tl = exponential_tildes(&m, s.epsilon);
            let mut prev: Option<[C64; 3]> = None;
            for &gt in &[25.0, 30.0] {
                let t = gt / -s.decay;
                let r = r_matrix(&m, &s, t, RMethod::ClosedForm).unwrap();
                let f = (I * s.epsilon * (2.0 * t)).exp();
                let got = [r.a / f, r.b / f, r.c / f];
                for (x, y) in got.iter().zip([tl.a, tl.b, tl.c]) {
                    assert!((x - y).norm() <= 1e-10 * y.norm(), "{x} vs {y}");
                }
                if let Some(q) = prev {
                    for (x, y) in got.iter().zip(q) {
                        assert!((x - y).norm() <= 1e-10 * y.norm());
                    }
                }
                prev = Some(got);
            }
        }
    }

    #[test]
    fn upper_sign_does_not_reproduce_r() {
        let (m, s) = mode_system(&ModelParams::periodic(8, 0.3, 2.0).unwrap(), 0.9);
        let e = s.epsilon;
        let upper_a = I * m.beta * m.beta / (e * e * e * 4.0);
        let t = 25.0 / -s.decay;
        let r = r_matrix(&m, &s, t, RMethod::ClosedForm).unwrap();
        let f = (I * e * (2.0 * t)).exp();
        assert!((r.a / f - upper_a).norm() > 0.1 * upper_a.norm());
    }

    /// The bracket applied to the time-dependent entries and the vacuum-first evolved state
    /// approaches `sum_k F_k e^{4|Gamma_k|t}`: the coefficients are its literal long-time limit.
    #[test]
    fn bracket_of_evolved_state_matches_decomposition() {
        let p = ModelParams::periodic(16, 0.3, 2.0).unwrap();
        let dec = mode_qfi_coefficients(&p).unwrap();
        let amps = crate::dynamics::ising_ground_amplitudes(&p).unwrap();
        for &(t, tol) in &[(10.0, 1e-6), (20.0, 1e-12)] {
            let mut lhs = 0.0;
            for m in &amps.modes {
                let (mode, spec) = mode_system(&p, m.k);
                let psi = propagator(&mode, spec.epsilon, t).apply(&m.vector());
                let r = r_matrix(&mode, &spec, t, RMethod::ClosedForm).unwrap();
                lhs += printed_bracket(&TildeEntries { a: r.a, b: r.b, c: r.c }, &swap(&psi));
            }
            let rhs = dec.evaluate(t);
            assert!((lhs / rhs - 1.0).abs() < tol, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn coefficients_nonnegative_and_fbar_dominates() {
        for &g in &[0.3, 1.6, 3.0, 3.4, 6.0] {
            let p = ModelParams::periodic(64, 0.6, g).unwrap();
            let dec = mode_qfi_coefficients(&p).unwrap();
            let max = dec.modes.iter().map(|m| m.f_k).fold(0.0, f64::max);
            assert!(dec.modes.iter().all(|m| m.f_k >= 0.0));
            assert!(fbar(&p).unwrap() >= max);
        }
    }

    #[test]
    fn hermitian_limit_is_degenerate() {
        let p = ModelParams::periodic(16, 0.3, 0.0).unwrap();
        let dec = mode_qfi_coefficients(&p).unwrap();
        assert!(dec.degenerate);
        assert!(dec.modes.iter().all(|m| m.gamma_k == 0.0 && m.law == GrowthLaw::Quadratic));
    }

    #[test]
    fn critical_mode_examples() {
        let gc = critical_gamma(0.6).unwrap();
        assert!(matches!(
            critical_mode_coefficient(0.6, gc),
            Err(QfiError::DivergentAtCritical { .. })
        ));
        assert!(critical_mode_coefficient(1.2, 1.0).is_err());
        let above = Mode::critical(0.6, 4.0).unwrap();
        assert!(above.spectrum().decay < 0.0);
        let f = critical_mode_coefficient(0.6, 4.0).unwrap();
        assert!(f.is_finite() && f > 0.0);
        for &g in &[1.0, 2.5, 3.5, 5.0] {
            let a = critical_mode_coefficient(0.45, g).unwrap();
            let b = critical_mode_coefficient(-0.45, g).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn fbar_density_converges_with_grid() {
        let per = |n: usize| {
            let p = ModelParams::periodic(n, 0.6, 1.6).unwrap();
            let dec = mode_qfi_coefficients(&p).unwrap();
            dec.modes.iter().map(|m| m.f_k).sum::<f64>() / n as f64
        };
        let (a, b) = (per(64), per(128));
        assert!((a - b).abs() / b < 0.02, "{a} {b}");
    }
}
