use mipt_qfi_core::{Boundary, ModelParams, C64};
use nalgebra::DMatrix;

use crate::{check_cap, Result, DENSE_CAP};

/// Nearest-neighbour pairs `(i, j)` of the chain.
pub fn bonds(n: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut b: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::PeriodicSpin && n > 2 {
        b.push((n - 1, 0));
    }
    b
}

/// Matrix-free `H_eff` with an explicit diagonal.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    n_sites: usize,
    diag: Vec<C64>,
    flips: Vec<usize>,
}

impl Hamiltonian {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let n = params.n_sites;
        check_cap(n, DENSE_CAP)?;
        let diag = (0..1usize << n)
            .map(|b| {
                let up = b.count_ones() as f64;
                let sz = 2.0 * up - n as f64;
                C64::new(-params.h * sz, -0.5 * params.gamma * up)
            })
            .collect();
        let flips = bonds(n, params.boundary).into_iter().map(|(i, j)| (1 << i) | (1 << j)).collect();
        Ok(Hamiltonian { n_sites: n, diag, flips })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `out = H psi`.
    pub fn apply(&self, psi: &[C64], out: &mut [C64]) {
        for (b, o) in out.iter_mut().enumerate() {
            let mut s = self.diag[b] * psi[b];
            for &m in &self.flips {
                s -= psi[b ^ m];
            }
            *o = s;
        }
    }

    /// Row-sum bound on `||H||`.
    pub fn norm_bound(&self) -> f64 {
        let d = self.diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        d + self.flips.len() as f64
    }
}

/// Dense real matrix of the Hermitian part (`gamma` ignored).
pub fn hermitian_matrix(params: &ModelParams) -> Result<DMatrix<f64>> {
    params.validate()?;
    let n = params.n_sites;
    check_cap(n, DENSE_CAP)?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let sz = 2.0 * b.count_ones() as f64 - n as f64;
        m[(b, b)] = -params.h * sz;
        for (i, j) in bonds(n, params.boundary) {
            m[(b ^ (1 << i) ^ (1 << j), b)] -= 1.0;
        }
    }
    Ok(m)
}
