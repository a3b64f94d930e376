//! Quantum Fisher information of the transverse-field Ising chain under continuous
//! monitoring of the fermion density, restricted to the no-click trajectory.
//!
//! * [`spectral`]: momentum grid, per-mode BdG matrices `M_k`, critical geometry.
//! * [`dynamics`]: Ising ground state in pair form and exact per-mode evolution.
//! * [`quench`]: `R_k` generators and the exact quench QFI for estimating `gamma`.
//! * [`decomposition`]: long-time mode coefficients, `F-bar`, the critical mode.
//! * [`gaussian`]: real-space Gaussian states, Pfaffian correlators and the `S_x` witness.
//! * [`fit`]: log-linear least squares for exponents and rates.

pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod gaussian;
pub mod mat2;
pub mod pfaffian;
pub mod quadrature;
pub mod quench;
pub mod spectral;

pub use decomposition::{
    critical_mode_coefficient, fbar, mode_qfi_coefficients, ModeDecomposition, ModeQfiCoefficient,
};
pub use dynamics::{evolve_amplitudes, ising_ground_amplitudes, BogoliubovAmplitudes};
pub use error::{QfiError, Result};
pub use fit::{fit_exponential_rate, fit_power_law, FitResult, FitWindow};
pub use gaussian::{
    entanglement_depth, evolve, init_state, witness_qfi, xx_correlator, GaussianEvolver,
    GaussianState, InitialState, MajoranaCorrelations,
};
pub use mat2::C64;
pub use pfaffian::pfaffian;
pub use quench::{qfi_quench, r_matrix, RMatrix, RMethod};
pub use spectral::{
    critical_gamma, critical_momentum, gap_character, momentum_grid, mode_system, Boundary,
    GapCharacter, Mode, ModeSpectrum, ModelParams,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
