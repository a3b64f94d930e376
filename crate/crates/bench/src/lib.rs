//! Shared fixtures for the criterion benchmarks in `benches/`.

use mipt_qfi_core::{evolve, init_state, GaussianState, InitialState, ModelParams, Result};

/// Parameter point of the quench-growth runs.
pub fn quench_point(gamma: f64) -> ModelParams {
    ModelParams::periodic(64, 0.3, gamma).expect("valid parameters")
}

/// Open-chain state evolved to `t = 2` from the vacuum, for correlator benchmarks.
pub fn witness_state(n_sites: usize, gamma: f64) -> Result<GaussianState> {
    let p = ModelParams::open(n_sites, 0.0, gamma)?;
    let s = init_state(n_sites, InitialState::Vacuum)?;
    evolve(&s, &p, 0.05, 40)
}
