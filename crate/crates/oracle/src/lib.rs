//! Exact many-body reference for the no-click chain on `2^N` spin amplitudes.
//!
//! Basis index bit `i` set means site `i` is up (`n_i = 1`, `sigma^z_i = +1`), so index 0 is
//! the fermion vacuum. `H_eff = -sum sigma^x_i sigma^x_j - h sum sigma^z_i - (i gamma / 2) sum n_i`.

mod evolve;
mod hamiltonian;
mod qfi;
mod state;

pub use evolve::{evolve_dense, evolve_unnormalized, Propagator};
pub use hamiltonian::{bonds, hermitian_matrix, Hamiltonian};
pub use qfi::{
    field_qfi_eigenbasis, generator_covariance_qfi, o_gamma_covariance_qfi, qfi_finite_difference,
    qfi_finite_difference_from, unnormalized_finite_difference, Parameter, QuadratureOptions,
};
pub use state::{ground_state, sx_variance_dense, DenseState};

use mipt_qfi_core::QfiError;

/// Largest chain handled by dense evolution.
pub const DENSE_CAP: usize = 12;
/// Largest chain handled by the time-quadrature path.
pub const QUADRATURE_CAP: usize = 10;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("N = {n} exceeds the oracle cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("finite difference not stable under step halving: {coarse} vs {refined}")]
    FiniteDifference { coarse: f64, refined: f64 },
    #[error("time quadrature did not converge: last two estimates {previous} and {last} after {panels} panels")]
    Quadrature { previous: f64, last: f64, panels: usize },
    #[error("ground state is degenerate: gap {gap:e}")]
    Degenerate { gap: f64 },
    #[error(transparent)]
    Model(#[from] QfiError),
}

pub type Result<T> = std::result::Result<T, OracleError>;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    Ok(())
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
