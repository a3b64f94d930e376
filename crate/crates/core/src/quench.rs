//! Generator matrices `R_k` and the exact quench QFI for estimating `gamma`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{eigenvector, ising_ground_amplitudes, propagator};
use crate::error::{invalid, QfiError, Result};
use crate::mat2::{bilinear, dot, norm_sqr, one_minus_exp_over, sin_cubic_remainder, sinc, Mat2, Vec2, C64, I};
use crate::quadrature::{adaptive_simpson, SimpsonOptions};
use crate::spectral::{Boundary, Mode, ModelParams, ModeSpectrum};

/// Traceless `R_k(t) = [[A, B], [C, -A]] = int_0^t e^{-iMs} sigma_z e^{iMs} ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub t: f64,
}

impl RMatrix {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, -self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RMethod {
    ClosedForm,
    Quadrature,
}

pub fn r_matrix(mode: &Mode, spec: &ModeSpectrum, t: f64, method: RMethod) -> Result<RMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("t must be finite and >= 0, got {t}"));
    }
    match method {
        RMethod::ClosedForm => Ok(r_closed_form(mode, spec.epsilon, t)),
        RMethod::Quadrature => {
            let sz = Mat2::sigma_z();
            let eps = spec.epsilon;
            let m = adaptive_simpson(
                |s| propagator(mode, eps, s) * sz * propagator(mode, eps, -s),
                0.0,
                t,
                SimpsonOptions::default(),
            )?;
            let [[a, b], [c, _]] = m.0;
            Ok(RMatrix { a, b, c, t })
        }
    }
}

/// Closed form rewritten around `(sin x - x) / x^3` so that it holds uniformly in `eps`,
/// including small `|eps t|` and the exceptional point.
fn r_closed_form(mode: &Mode, eps: C64, t: f64) -> RMatrix {
    let x = eps * (2.0 * t);
    let cubic = sin_cubic_remainder(x) * (4.0 * t * t * t);
    let s = sinc(eps * t) * t;
    let beta = mode.beta;
    let alpha = mode.alpha;
    let a = C64::new(t, 0.0) + cubic * (beta * beta);
    let secular = -cubic * alpha * beta;
    let osc = I * beta * s * s;
    RMatrix { a, b: secular + osc, c: secular - osc, t }
}

/// `<R^dag R> - |<R>|^2` in the (unnormalized) state `psi`.
pub fn covariance(r: &Mat2, psi: &Vec2) -> f64 {
    covariance_of(psi, &r.apply(psi))
}

/// Covariance from `psi` and `r = R psi`, via the component of `r` orthogonal to `psi`.
fn covariance_of(psi: &Vec2, r: &Vec2) -> f64 {
    let n = norm_sqr(psi);
    let proj = dot(psi, r) / n;
    let perp = [r[0] - psi[0] * proj, r[1] - psi[1] * proj];
    norm_sqr(&perp) / n
}

/// `|Gamma| t` above which the QFI of a mode is evaluated in the eigenbasis of `M_k`.
const SPECTRAL_SWITCH: f64 = 2.0;

/// Exact per-mode QFI contribution `Cov(R_k)` in the state `exp(-iM_k t) psi0`.
pub fn mode_qfi(mode: &Mode, spec: &ModeSpectrum, psi0: &Vec2, t: f64) -> f64 {
    let eps = spec.epsilon;
    let grows = -spec.decay * t >= SPECTRAL_SWITCH;
    if grows {
        if let Some(v) = mode_qfi_spectral(mode, eps, psi0, t) {
            return v;
        }
    }
    mode_qfi_direct(mode, eps, psi0, t)
}

pub(crate) fn mode_qfi_direct(mode: &Mode, eps: C64, psi0: &Vec2, t: f64) -> f64 {
    let psi = propagator(mode, eps, t).apply(psi0);
    let r = r_closed_form(mode, eps, t).matrix();
    covariance(&r, &psi)
}

/// Same quantity with the growth factor removed analytically.
///
/// With `M = eps P1 - eps P2` (bilinear projectors, `M` is complex symmetric) and
/// `w = e^{-2 i eps t}`, the state is proportional to `c1 w phi1 + c2 phi2` and
/// `R` acts on it through `t`, `t w` and `(1 - w) / (2 i eps)` only.
pub(crate) fn mode_qfi_spectral(mode: &Mode, eps: C64, psi0: &Vec2, t: f64) -> Option<f64> {
    let p1 = eigenvector(mode, eps);
    let p2 = eigenvector(mode, -eps);
    let n1 = bilinear(&p1, &p1);
    let n2 = bilinear(&p2, &p2);
    if n1.norm() < 1e-6 || n2.norm() < 1e-6 {
        return None;
    }
    let c1 = bilinear(&p1, psi0) / n1;
    let c2 = bilinear(&p2, psi0) / n2;
    let w = (-I * eps * (2.0 * t)).exp();
    let k = one_minus_exp_over(I * eps * (2.0 * t)) * t;

    let sz = |v: &Vec2| [v[0], -v[1]];
    let proj = |p: &Vec2, n: C64, v: &Vec2| {
        let s = bilinear(p, v) / n;
        [p[0] * s, p[1] * s]
    };
    let s1 = sz(&p1);
    let s2 = sz(&p2);
    let p1s1 = proj(&p1, n1, &s1);
    let p2s2 = proj(&p2, n2, &s2);
    let p1s2 = proj(&p1, n1, &s2);
    let p2s1 = proj(&p2, n2, &s1);

    let psi = [c1 * w * p1[0] + c2 * p2[0], c1 * w * p1[1] + c2 * p2[1]];
    let mut r = [C64::new(0.0, 0.0); 2];
    for i in 0..2 {
        r[i] = p1s1[i] * (c1 * w * t) + p2s2[i] * (c2 * t) + (p1s2[i] * c2 + p2s1[i] * c1) * k;
    }
    let v = covariance_of(&psi, &r);
    v.is_finite().then_some(v)
}

/// Quench QFI `F(t)` for estimating `gamma`, starting from the Hermitian Ising ground state.
///
/// Each mode contributes `4 Cov(O_k)` with `O_k = -R_k / 2`, i.e. `Cov(R_k)`. Modes are summed
/// in ascending `k`.
pub fn qfi_quench(params: &ModelParams, t: f64) -> Result<f64> {
    if params.boundary != Boundary::PeriodicSpin {
        return invalid("qfi_quench needs the periodic-spin boundary");
    }
    if !(t.is_finite() && t >= 0.0) {
        return invalid(format!("t must be finite and >= 0, got {t}"));
    }
    let amps = ising_ground_amplitudes(params)?;
    let mut total = 0.0;
    for m in &amps.modes {
        let mode = Mode::new(m.k, params.h, params.gamma);
        total += mode_qfi(&mode, &mode.spectrum(), &m.vector(), t);
    }
    if !total.is_finite() {
        return Err(QfiError::NonFinite("qfi_quench"));
    }
    Ok(total.max(0.0))
}

/// Long-time limit of `qfi_quench`: Fubini-Study metric of the dominant eigenvectors.
pub fn qfi_quench_saturation(params: &ModelParams) -> Result<f64> {
    crate::spectral::grid_modes(params)?
        .iter()
        .map(|(mode, spec)| dominant_metric(mode, spec.epsilon))
        .try_fold(0.0, |acc, v| {
            let v = v?;
            Ok(acc + v)
        })
}

fn dominant_metric(mode: &Mode, eps: C64) -> Result<f64> {
    // eigenvector (eps - alpha, -beta) of the branch -eps, as a projective ratio
    if eps.norm() < 1e-12 {
        return Err(QfiError::ExceptionalPoint { k: mode.k, eps_abs: eps.norm() });
    }
    let a = mode.alpha;
    let b = mode.beta;
    let d_alpha = C64::new(0.0, -0.5);
    let d_eps = a * d_alpha / eps;
    let (z, dz) = if (eps - a).norm() >= (eps + a).norm() {
        let den = eps - a;
        (-b / den, b * (d_eps - d_alpha) / (den * den))
    } else {
        let den = C64::new(b, 0.0);
        (-(a + eps) / den, -(d_alpha + d_eps) / den)
    };
    let q = 1.0 + z.norm_sqr();
    Ok(4.0 * dz.norm_sqr() / (q * q))
}
