//! Real-space Gaussian states of the open chain under the no-click evolution.
//!
//! A state is stored as the `2N x N` frame `W = [U; V]` with orthonormal columns. Column `m`
//! defines the annihilator `chi_m = sum_i conj(U_im) c_i + conj(V_im) c_i^dag` of the state, so
//! the fermion vacuum is `U = I`, `V = 0`. With `Psi = (c, c^dag)` and `[H_eff, Psi] = -K Psi`,
//! the frame evolves as `W -> exp(-i K^dag t) W` up to a change of basis within its span.

mod correlations;

pub use correlations::{
    energy, entanglement_depth, occupations, witness_qfi, xx_correlator, MajoranaCorrelations,
};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QfiError, Result};
use crate::mat2::C64;
use crate::spectral::{Boundary, ModelParams};

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    w: DMatrix<C64>,
    n_sites: usize,
}

impl GaussianState {
    /// Wraps a frame without checks; columns must be orthonormal and mutually isotropic.
    pub fn from_frame(w: DMatrix<C64>) -> Result<Self> {
        let (r, c) = w.shape();
        if r != 2 * c || c == 0 {
            return invalid(format!("frame must be 2N x N, got {r} x {c}"));
        }
        Ok(GaussianState { w, n_sites: c })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn frame(&self) -> &DMatrix<C64> {
        &self.w
    }

    pub fn u(&self) -> DMatrix<C64> {
        self.w.rows(0, self.n_sites).into_owned()
    }

    pub fn v(&self) -> DMatrix<C64> {
        self.w.rows(self.n_sites, self.n_sites).into_owned()
    }

    /// `max |U^dag U + V^dag V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.w.adjoint() * &self.w;
        max_defect(&g, true)
    }

    /// `max |W^T Sigma_x W|`: vanishes when the columns define mutually anticommuting annihilators.
    pub fn isotropy_defect(&self) -> f64 {
        let (u, v) = (self.u(), self.v());
        let m = u.transpose() * &v + v.transpose() * &u;
        max_defect(&m, false)
    }

    /// `max |Z + Z^T| / max(1, max |Z|)`, or `None` if `U` is singular.
    pub fn pairing_asymmetry(&self) -> Option<f64> {
        let z = self.pairing()?;
        let scale = z.iter().map(|x| x.norm()).fold(1.0, f64::max);
        Some(max_defect(&(&z + z.transpose()), false) / scale)
    }

    /// Pairing matrix `Z = -(U^dag)^{-1} V^dag`, if `U` is invertible.
    pub fn pairing(&self) -> Option<DMatrix<C64>> {
        let ud = self.u().adjoint();
        let vd = self.v().adjoint();
        ud.lu().solve(&(-vd))
    }

    /// Two-point matrix `<Psi Psi^dag> = W W^dag`.
    pub fn correlation(&self) -> DMatrix<C64> {
        &self.w * self.w.adjoint()
    }
}

fn max_defect(g: &DMatrix<C64>, identity: bool) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if identity && i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InitialState {
    /// Fermion vacuum, `<n_i> = 0`.
    Vacuum,
    /// Ground state of the Hermitian open chain at field `h`. At `h = 0` the open chain has an
    /// exact zero-mode pair; it is filled by an isotropic combination only if
    /// `lift_zero_modes` is set.
    HermitianGround {
        h: f64,
        #[serde(default)]
        lift_zero_modes: bool,
    },
}

/// Single-particle kernel `K` with `[H_eff, Psi] = -K Psi`, `Psi = (c_1..c_N, c_1^dag..c_N^dag)`.
pub fn bdg_kernel(n_sites: usize, h: f64, gamma: f64, boundary: Boundary) -> Result<DMatrix<C64>> {
    if boundary != Boundary::Open {
        return invalid("the real-space kernel is implemented for the open chain only");
    }
    let n = n_sites;
    let mut k = DMatrix::<C64>::zeros(2 * n, 2 * n);
    let diag = C64::new(-2.0 * h, -gamma / 2.0);
    for i in 0..n {
        k[(i, i)] = diag;
        k[(n + i, n + i)] = -diag;
    }
    let one = C64::new(1.0, 0.0);
    for i in 0..n.saturating_sub(1) {
        let j = i + 1;
        k[(i, j)] = -one;
        k[(j, i)] = -one;
        k[(n + i, n + j)] = one;
        k[(n + j, n + i)] = one;
        // pairing blocks
        k[(i, n + j)] = -one;
        k[(j, n + i)] = one;
        k[(n + i, j)] = one;
        k[(n + j, i)] = -one;
    }
    Ok(k)
}

pub fn init_state(n_sites: usize, kind: InitialState) -> Result<GaussianState> {
    if n_sites < 2 || n_sites % 2 != 0 {
        return invalid(format!("n_sites must be even and >= 2, got {n_sites}"));
    }
    let n = n_sites;
    match kind {
        InitialState::Vacuum => {
            let mut w = DMatrix::zeros(2 * n, n);
            for i in 0..n {
                w[(i, i)] = C64::new(1.0, 0.0);
            }
            Ok(GaussianState { w, n_sites: n })
        }
        InitialState::HermitianGround { h, lift_zero_modes } => {
            hermitian_ground(n, h, lift_zero_modes)
        }
    }
}

fn hermitian_ground(n: usize, h: f64, lift: bool) -> Result<GaussianState> {
    let k = bdg_kernel(n, h, 0.0, Boundary::Open)?;
    let real = k.map(|z| z.re);
    let eig = SymmetricEigen::new(real);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let positive: Vec<usize> = order.iter().copied().filter(|&i| eig.eigenvalues[i] > tol).collect();
    let zero: Vec<usize> = order.iter().copied().filter(|&i| eig.eigenvalues[i].abs() <= tol).collect();

    let mut w = DMatrix::<C64>::zeros(2 * n, n);
    for (col, &i) in positive.iter().enumerate() {
        for r in 0..2 * n {
            w[(r, col)] = C64::new(eig.eigenvectors[(r, i)], 0.0);
        }
    }
    if !zero.is_empty() {
        if !lift {
            return Err(QfiError::DegenerateGroundState { zero_modes: zero.len() });
        }
        if zero.len() != 2 || positive.len() != n - 1 {
            return Err(QfiError::DegenerateGroundState { zero_modes: zero.len() });
        }
        let e = |c: usize, r: usize| eig.eigenvectors[(r, zero[c])];
        // bilinear form v^T Sigma_x v on the zero-mode plane
        let q = |a: usize, b: usize| {
            (0..n).map(|r| e(a, r) * e(b, n + r) + e(a, n + r) * e(b, r)).sum::<f64>()
        };
        let (q11, q12, q22) = (q(0, 0), q(0, 1), q(1, 1));
        let col = n - 1;
        let z = if q22.abs() < 1e-14 {
            // e1 itself may be isotropic; otherwise e2 is
            if q11.abs() < 1e-14 { C64::new(0.0, 0.0) } else { C64::new(-q11 / (2.0 * q12), 0.0) }
        } else {
            (C64::new(q12 * q12 - q11 * q22, 0.0).sqrt() - q12) / q22
        };
        let mut v: Vec<C64> = (0..2 * n).map(|r| C64::new(e(0, r), 0.0) + z * e(1, r)).collect();
        let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
        for (r, x) in v.into_iter().enumerate() {
            w[(r, col)] = x;
        }
    } else if positive.len() != n {
        return Err(QfiError::DegenerateGroundState { zero_modes: 2 * n - 2 * positive.len() });
    }
    Ok(GaussianState { w, n_sites: n })
}

/// Exact step map `W -> qr(exp(-i K^dag dt) W)` for a fixed kernel.
#[derive(Debug, Clone)]
pub struct GaussianEvolver {
    step: DMatrix<C64>,
    dt: f64,
    n_sites: usize,
}

impl GaussianEvolver {
    pub fn new(params: &ModelParams, dt: f64) -> Result<Self> {
        params.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return invalid(format!("dt must be finite and > 0, got {dt}"));
        }
        let k = bdg_kernel(params.n_sites, params.h, params.gamma, params.boundary)?;
        let step = (k.adjoint() * C64::new(0.0, -dt)).exp();
        Ok(GaussianEvolver { step, dt, n_sites: params.n_sites })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step without renormalization.
    pub fn propagate(&self, state: &GaussianState) -> DMatrix<C64> {
        &self.step * &state.w
    }

    /// One step followed by QR re-orthonormalization.
    pub fn step(&self, state: &GaussianState, index: usize) -> Result<GaussianState> {
        if state.n_sites != self.n_sites {
            return invalid("state size does not match the evolver");
        }
        let raw = self.propagate(state);
        let qr = raw.qr();
        let r = qr.r();
        let diag: Vec<f64> = (0..self.n_sites).map(|i| r[(i, i)].norm()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min.is_finite() && min > 1e-13 * max) {
            return Err(QfiError::RankCollapse { step: index, min_diag: min });
        }
        Ok(GaussianState { w: qr.q(), n_sites: self.n_sites })
    }

    pub fn evolve(&self, state: &GaussianState, n_steps: usize) -> Result<GaussianState> {
        let mut s = state.clone();
        for i in 0..n_steps {
            s = self.step(&s, i)?;
        }
        Ok(s)
    }
}

/// Convenience wrapper: `n_steps` exact steps of size `dt`.
pub fn evolve(state: &GaussianState, params: &ModelParams, dt: f64, n_steps: usize) -> Result<GaussianState> {
    GaussianEvolver::new(params, dt)?.evolve(state, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_frame() {
        let s = init_state(4, InitialState::Vacuum).unwrap();
        assert_eq!(s.orthonormality_defect(), 0.0);
        assert!(s.pairing().unwrap().iter().all(|z| z.norm() == 0.0));
        assert!(init_state(5, InitialState::Vacuum).is_err());
    }

    #[test]
    fn kernel_is_hermitian_without_monitoring() {
        let k = bdg_kernel(6, 0.4, 0.0, Boundary::Open).unwrap();
        assert!((&k - k.adjoint()).iter().all(|z| z.norm() < 1e-15));
        assert!(bdg_kernel(6, 0.4, 0.0, Boundary::PeriodicSpin).is_err());
    }

    #[test]
    fn zero_field_ground_state_needs_explicit_lift() {
        let r = init_state(6, InitialState::HermitianGround { h: 0.0, lift_zero_modes: false });
        assert!(matches!(r, Err(QfiError::DegenerateGroundState { zero_modes: 2 })));
        let s = init_state(6, InitialState::HermitianGround { h: 0.0, lift_zero_modes: true }).unwrap();
        assert!(s.orthonormality_defect() < 1e-12);
        // the lifted column keeps the frame isotropic: W^T Sigma_x W = 0
        let n = 6;
        let w = s.frame();
        for a in 0..n {
            for b in 0..n {
                let x: C64 = (0..n).map(|r| w[(r, a)] * w[(n + r, b)] + w[(n + r, a)] * w[(r, b)]).sum();
                assert!(x.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_step_without_monitoring() {
        let p = ModelParams::open(8, 0.0, 0.0).unwrap();
        let ev = GaussianEvolver::new(&p, 0.3).unwrap();
        let s = init_state(8, InitialState::Vacuum).unwrap();
        let raw = ev.propagate(&s);
        let g = raw.adjoint() * &raw;
        assert!(max_defect(&g, true) < 1e-10);
    }

    #[test]
    fn frame_stays_orthonormal_and_pairing_antisymmetric() {
        let p = ModelParams::open(10, 0.0, 1.5).unwrap();
        let ev = GaussianEvolver::new(&p, 0.05).unwrap();
        let mut s = init_state(10, InitialState::Vacuum).unwrap();
        for i in 0..60 {
            s = ev.step(&s, i).unwrap();
            assert!(s.orthonormality_defect() < 1e-10);
            assert!(s.isotropy_defect() < 1e-10);
            assert!(s.pairing_asymmetry().unwrap() < 1e-10);
        }
    }

    #[test]
    fn step_size_only_sets_renormalization_cadence() {
        let p = ModelParams::open(8, 0.0, 0.75).unwrap();
        let s0 = init_state(8, InitialState::Vacuum).unwrap();
        let a = evolve(&s0, &p, 0.1, 20).unwrap();
        let b = evolve(&s0, &p, 0.05, 40).unwrap();
        let (ca, cb) = (a.correlation(), b.correlation());
        assert!((&ca - &cb).iter().all(|z| z.norm() < 1e-10));
    }
}
