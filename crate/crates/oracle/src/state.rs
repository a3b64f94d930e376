use mipt_qfi_core::{Boundary, ModelParams, C64};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::hamiltonian::{bonds, hermitian_matrix};
use crate::{check_cap, OracleError, Result, DENSE_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    amps: Vec<C64>,
    n_sites: usize,
}

impl DenseState {
    pub fn from_amplitudes(n_sites: usize, amps: Vec<C64>) -> Result<Self> {
        check_cap(n_sites, DENSE_CAP)?;
        if amps.len() != 1 << n_sites {
            return Err(OracleError::Invalid(format!(
                "expected {} amplitudes, got {}",
                1usize << n_sites,
                amps.len()
            )));
        }
        Ok(DenseState { amps, n_sites })
    }

    fn basis(n_sites: usize, index: usize) -> Result<Self> {
        check_cap(n_sites, DENSE_CAP)?;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_sites];
        amps[index] = C64::new(1.0, 0.0);
        Ok(DenseState { amps, n_sites })
    }

    /// All spins down.
    pub fn vacuum(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, 0)
    }

    pub fn all_up(n_sites: usize) -> Result<Self> {
        Self::basis(n_sites, (1 << n_sites) - 1)
    }

    /// `(|+x ... +x> + |-x ... -x>) / sqrt 2`.
    pub fn ghz_x(n_sites: usize) -> Result<Self> {
        check_cap(n_sites, DENSE_CAP)?;
        let dim = 1usize << n_sites;
        let a = (dim as f64).sqrt().recip();
        // |-x>^N has sign (-1)^{#up}; the sum keeps even-#up components
        let amps = (0..dim)
            .map(|b| if b.count_ones() % 2 == 0 { C64::new(2.0 * a, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        Ok(DenseState { amps, n_sites }.normalized())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        DenseState { amps: self.amps.iter().map(|z| z / n).collect(), n_sites: self.n_sites }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &DenseState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `<n_i>` of the normalized state.
    pub fn occupations(&self) -> Vec<f64> {
        let w = self.norm().powi(2);
        (0..self.n_sites)
            .map(|i| {
                self.amps
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| b >> i & 1 == 1)
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
                    / w
            })
            .collect()
    }

    fn sx_apply(&self) -> Vec<C64> {
        (0..self.amps.len())
            .map(|b| (0..self.n_sites).map(|i| self.amps[b ^ (1 << i)]).sum::<C64>() * 0.5)
            .collect()
    }

    /// `<S_x>` with `S_x = (1/2) sum sigma^x_i`.
    pub fn sx_mean(&self) -> f64 {
        let s = self.sx_apply();
        let w = self.norm().powi(2);
        self.amps.iter().zip(&s).map(|(a, b)| a.conj() * b).sum::<C64>().re / w
    }

    /// `<sigma^x_i sigma^x_j>`.
    pub fn xx(&self, i: usize, j: usize) -> f64 {
        let m = (1 << i) ^ (1 << j);
        let w = self.norm().powi(2);
        (0..self.amps.len()).map(|b| (self.amps[b].conj() * self.amps[b ^ m]).re).sum::<f64>() / w
    }

    /// `<H>` of the Hermitian chain.
    pub fn energy(&self, params: &ModelParams) -> f64 {
        let n = self.n_sites;
        let w = self.norm().powi(2);
        let field: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(b, z)| z.norm_sqr() * (2.0 * b.count_ones() as f64 - n as f64))
            .sum::<f64>()
            / w;
        let bonds: f64 = bonds(n, params.boundary).into_iter().map(|(i, j)| self.xx(i, j)).sum();
        -bonds - params.h * field
    }
}

/// Exact `<S_x^2> - <S_x>^2` of the normalized state.
pub fn sx_variance_dense(state: &DenseState) -> f64 {
    let s = state.sx_apply();
    let w = state.norm().powi(2);
    let second = s.iter().map(|z| z.norm_sqr()).sum::<f64>() / w;
    let mean = state.sx_mean();
    second - mean * mean
}

/// Ground state and energy of the Hermitian chain at `params.h`.
///
/// For the periodic chain the search is restricted to an even number of up spins, the sector
/// described by the antiperiodic momentum grid.
pub fn ground_state(params: &ModelParams) -> Result<(f64, DenseState)> {
    let n = params.n_sites;
    let full = hermitian_matrix(params)?;
    let sector: Vec<usize> = (0..1usize << n)
        .filter(|b| params.boundary == Boundary::Open || b.count_ones() % 2 == 0)
        .collect();
    let d = sector.len();
    let block = DMatrix::from_fn(d, d, |r, c| full[(sector[r], sector[c])]);
    let eig = SymmetricEigen::new(block);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (e0, e1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if e1 - e0 < 1e-8 {
        return Err(OracleError::Degenerate { gap: e1 - e0 });
    }
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (r, &b) in sector.iter().enumerate() {
        amps[b] = C64::new(eig.eigenvectors[(r, order[0])], 0.0);
    }
    Ok((e0, DenseState { amps, n_sites: n }.normalized()))
}
