use mipt_qfi_core::{ModelParams, C64};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::evolve::{evolve_dense, evolve_unnormalized, Propagator};
use crate::hamiltonian::{hermitian_matrix, Hamiltonian};
use crate::state::{ground_state, DenseState};
use crate::{check_cap, OracleError, Result, QUADRATURE_CAP};

/// The parameter being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Gamma,
    Field,
}

impl Parameter {
    fn shifted(self, params: &ModelParams, dx: f64) -> ModelParams {
        let mut p = params.clone();
        match self {
            Parameter::Gamma => p.gamma += dx,
            Parameter::Field => p.h += dx,
        }
        p
    }

    /// Diagonal of `d(-i H_eff)/dx` in the spin basis.
    fn generator_diagonal(self, n_sites: usize) -> Vec<C64> {
        (0..1usize << n_sites)
            .map(|b| {
                let up = b.count_ones() as f64;
                match self {
                    Parameter::Gamma => C64::new(-0.5 * up, 0.0),
                    Parameter::Field => C64::new(0.0, 2.0 * up - n_sites as f64),
                }
            })
            .collect()
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `4 (<d|d> - |<psi|d>|^2)` for unit `psi`, via the part of `d` orthogonal to `psi`.
fn fisher(psi: &[C64], d: &[C64]) -> f64 {
    let c = inner(psi, d);
    4.0 * psi.iter().zip(d).map(|(p, x)| (x - c * p).norm_sqr()).sum::<f64>()
}

fn states_at(params: &ModelParams, t: f64, initial: &DenseState, par: Parameter, dx: f64) -> Result<(DenseState, DenseState)> {
    Ok((
        evolve_dense(&par.shifted(params, dx), t, initial)?,
        evolve_dense(&par.shifted(params, -dx), t, initial)?,
    ))
}

fn central(plus: &DenseState, minus: &DenseState, dx: f64) -> Vec<C64> {
    plus.amplitudes().iter().zip(minus.amplitudes()).map(|(a, b)| (a - b) / (2.0 * dx)).collect()
}

/// QFI of the normalized no-click state by central differences, extrapolated once.
///
/// Returns the extrapolated value; fails if it differs from the plain `delta` estimate by more
/// than `1e-6` relative.
pub fn qfi_finite_difference_from(
    params: &ModelParams,
    t: f64,
    initial: &DenseState,
    par: Parameter,
    delta: f64,
) -> Result<f64> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(OracleError::Invalid(format!("delta must be finite and > 0, got {delta}")));
    }
    let psi = evolve_dense(params, t, initial)?;
    let (p1, m1) = states_at(params, t, initial, par, delta)?;
    let (p2, m2) = states_at(params, t, initial, par, delta / 2.0)?;
    let d1 = central(&p1, &m1, delta);
    let d2 = central(&p2, &m2, delta / 2.0);
    let dr: Vec<C64> = d1.iter().zip(&d2).map(|(a, b)| (b * 4.0 - a) / 3.0).collect();
    let coarse = fisher(psi.amplitudes(), &d1);
    let refined = fisher(psi.amplitudes(), &dr);
    if (coarse - refined).abs() > 1e-6 * refined.abs().max(1e-9) {
        return Err(OracleError::FiniteDifference { coarse, refined });
    }
    Ok(refined)
}

/// Quench QFI for `gamma` starting from the Hermitian ground state at `params.h`.
pub fn qfi_finite_difference(params: &ModelParams, t: f64, delta: f64) -> Result<f64> {
    let (_, psi0) = ground_state(params)?;
    qfi_finite_difference_from(params, t, &psi0, Parameter::Gamma, delta)
}

/// The same central difference taken on the unnormalized `exp(-i H_eff t)|psi_0>`, plugged into
/// the unit-norm formula. Only meaningful at `gamma = 0`; kept to show the discrepancy.
pub fn unnormalized_finite_difference(params: &ModelParams, t: f64, initial: &DenseState, delta: f64) -> Result<f64> {
    let phi = evolve_unnormalized(params, t, initial)?;
    let p = evolve_unnormalized(&Parameter::Gamma.shifted(params, delta), t, initial)?;
    let m = evolve_unnormalized(&Parameter::Gamma.shifted(params, -delta), t, initial)?;
    let d = central(&p, &m, delta);
    let c = inner(phi.amplitudes(), &d);
    Ok(4.0 * (inner(&d, &d).re - c.norm_sqr()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Relative change between successive extrapolated estimates that ends the doubling.
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { rel_tol: 1e-10, initial_panels: 16, max_panels: 1 << 16 }
    }
}

/// `O psi_t` by composite Simpson on `m` panels of `int_0^t exp(-i H (t-s)) D exp(-i H s) psi_0 ds`,
/// accumulated Horner-style so each panel costs one short propagation. Returns it with `psi_t`.
fn generator_on_state(ham: &Hamiltonian, d: &[C64], psi0: &[C64], t: f64, m: usize) -> Result<(Vec<C64>, Vec<C64>)> {
    let h = t / m as f64;
    let prop = Propagator::new(ham.clone(), h)?;
    let mut phi = psi0.to_vec();
    let mut acc: Vec<C64> = phi.iter().zip(d).map(|(p, x)| p * x).collect();
    for j in 1..=m {
        phi = prop.apply(&phi);
        acc = prop.apply(&acc);
        let w = if j == m { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
        for ((a, p), x) in acc.iter_mut().zip(&phi).zip(d) {
            *a += p * x * w;
        }
    }
    let nrm = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let o: Vec<C64> = acc.iter().map(|z| z * (h / 3.0 / nrm)).collect();
    let psi: Vec<C64> = phi.iter().map(|z| z / nrm).collect();
    Ok((o, psi))
}

/// `4 (<O^dag O> - |<O>|^2)` with `O = int_0^t exp(-i H s) d(-i H)/dx exp(i H s) ds` on the
/// normalized state at `t`. Panels double until two Richardson-corrected estimates agree.
pub fn generator_covariance_qfi(
    params: &ModelParams,
    t: f64,
    initial: &DenseState,
    par: Parameter,
    opts: QuadratureOptions,
) -> Result<f64> {
    check_cap(params.n_sites, QUADRATURE_CAP)?;
    if initial.n_sites() != params.n_sites {
        return Err(OracleError::Invalid("state size does not match the parameters".into()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(OracleError::Invalid(format!("t must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let ham = Hamiltonian::new(params)?;
    let d = par.generator_diagonal(params.n_sites);
    let psi0 = initial.normalized();
    let mut m = opts.initial_panels.max(2) & !1;
    let (mut prev_o, _) = generator_on_state(&ham, &d, psi0.amplitudes(), t, m)?;
    let mut prev_f: Option<f64> = None;
    loop {
        m *= 2;
        if m > opts.max_panels {
            let last = prev_f.unwrap_or(f64::NAN);
            return Err(OracleError::Quadrature { previous: last, last, panels: m / 2 });
        }
        let (o, psi) = generator_on_state(&ham, &d, psi0.amplitudes(), t, m)?;
        let rich: Vec<C64> = o.iter().zip(&prev_o).map(|(a, b)| a + (a - b) / 15.0).collect();
        let f = fisher(&psi, &rich);
        if let Some(p) = prev_f {
            if (f - p).abs() <= opts.rel_tol * f.abs().max(1e-12) {
                return Ok(f);
            }
        }
        prev_f = Some(f);
        prev_o = o;
    }
}

/// Quench QFI for `gamma` from the Hermitian ground state, through the time-integrated generator.
pub fn o_gamma_covariance_qfi(params: &ModelParams, t: f64) -> Result<f64> {
    let (_, psi0) = ground_state(params)?;
    generator_covariance_qfi(params, t, &psi0, Parameter::Gamma, QuadratureOptions::default())
}

/// QFI for `h` under unitary evolution (`gamma = 0`), from the eigenbasis of `H`:
/// `O_mn = D_mn (1 - exp(-i w t)) / (i w)` with `w = E_m - E_n`.
pub fn field_qfi_eigenbasis(params: &ModelParams, t: f64, initial: &DenseState) -> Result<f64> {
    if params.gamma != 0.0 {
        return Err(OracleError::Invalid("the eigenbasis formula needs gamma = 0".into()));
    }
    let n = params.n_sites;
    let dim = 1usize << n;
    let eig = SymmetricEigen::new(hermitian_matrix(params)?);
    let v = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let e = &eig.eigenvalues;
    let psi0 = initial.normalized();
    let c0 = v.adjoint() * nalgebra::DVector::from_column_slice(psi0.amplitudes());
    let c: Vec<C64> = (0..dim).map(|m| c0[m] * C64::from_polar(1.0, -e[m] * t)).collect();
    let dd = Parameter::Field.generator_diagonal(n);
    let dvt = DMatrix::from_fn(dim, dim, |b, m| dd[b] * v[(b, m)]);
    let dm = v.adjoint() * dvt;
    let mut o_psi = vec![C64::new(0.0, 0.0); dim];
    for m in 0..dim {
        for k in 0..dim {
            let w = e[m] - e[k];
            let x = 0.5 * w * t;
            let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
            let g = C64::from_polar(t * sinc, -x);
            o_psi[m] += dm[(m, k)] * g * c[k];
        }
    }
    Ok(fisher(&c, &o_psi))
}
