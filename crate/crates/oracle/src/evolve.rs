use mipt_qfi_core::{ModelParams, C64};

use crate::hamiltonian::Hamiltonian;
use crate::state::DenseState;
use crate::{OracleError, Result};

// Taylor sub-steps keep ||H|| dt below this
const MAX_THETA: f64 = 0.5;
const MAX_TERMS: usize = 60;

/// `exp(-i H_eff dt)` applied by a truncated Taylor series on short sub-steps.
///
/// With `||H|| dt_sub <= 1/2` the series is stopped once a term falls below `1e-17` of the
/// running sum; the discarded tail is then bounded by that last term.
#[derive(Debug, Clone)]
pub struct Propagator {
    ham: Hamiltonian,
    sub_dt: f64,
    substeps: usize,
}

impl Propagator {
    pub fn new(ham: Hamiltonian, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt >= 0.0) {
            return Err(OracleError::Invalid(format!("time step must be finite and >= 0, got {dt}")));
        }
        let substeps = ((dt * ham.norm_bound() / MAX_THETA).ceil() as usize).max(1);
        Ok(Propagator { ham, sub_dt: dt / substeps as f64, substeps })
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.ham
    }

    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut acc = psi.to_vec();
        if self.sub_dt == 0.0 {
            return acc;
        }
        let mut term = vec![C64::new(0.0, 0.0); psi.len()];
        let mut next = vec![C64::new(0.0, 0.0); psi.len()];
        for _ in 0..self.substeps {
            term.copy_from_slice(&acc);
            for k in 1..=MAX_TERMS {
                self.ham.apply(&term, &mut next);
                let f = C64::new(0.0, -self.sub_dt / k as f64);
                let mut tn = 0.0;
                for (t, x) in term.iter_mut().zip(&next) {
                    *t = x * f;
                    tn += t.norm_sqr();
                }
                let mut an = 0.0;
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                    an += a.norm_sqr();
                }
                if tn <= 1e-34 * an || tn == 0.0 {
                    break;
                }
            }
        }
        acc
    }
}

/// `exp(-i H_eff t) |psi_0>` without normalization.
pub fn evolve_unnormalized(params: &ModelParams, t: f64, initial: &DenseState) -> Result<DenseState> {
    if initial.n_sites() != params.n_sites {
        return Err(OracleError::Invalid("state size does not match the parameters".into()));
    }
    let prop = Propagator::new(Hamiltonian::new(params)?, t)?;
    DenseState::from_amplitudes(params.n_sites, prop.apply(initial.amplitudes()))
}

/// Normalized no-click state at time `t`.
pub fn evolve_dense(params: &ModelParams, t: f64, initial: &DenseState) -> Result<DenseState> {
    Ok(evolve_unnormalized(params, t, initial)?.normalized())
}
