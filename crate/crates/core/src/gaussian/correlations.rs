use nalgebra::DMatrix;
use rayon::prelude::*;

use super::GaussianState;
use crate::error::{invalid, Result};
use crate::mat2::C64;
use crate::pfaffian::pfaffian_in_place;

/// Majorana two-point functions `<x_p x_q>` (`p != q`) of a Gaussian state, with
/// `x_{2l} = c_l + c_l^dag` and `x_{2l+1} = c_l^dag - c_l`.
#[derive(Debug, Clone)]
pub struct MajoranaCorrelations {
    g: Vec<C64>,
    dim: usize,
}

impl MajoranaCorrelations {
    pub fn new(state: &GaussianState) -> Self {
        let n = state.n_sites();
        let c = state.correlation();
        // <Psi_a Psi_b> = C[a, swap(b)]
        let pair = |a: usize, b: usize| c[(a, if b < n { b + n } else { b - n })];
        let idx = |p: usize| -> [(usize, f64); 2] {
            let l = p / 2;
            if p % 2 == 0 {
                [(l, 1.0), (n + l, 1.0)]
            } else {
                [(n + l, 1.0), (l, -1.0)]
            }
        };
        let dim = 2 * n;
        let mut raw = vec![C64::new(0.0, 0.0); dim * dim];
        for p in 0..dim {
            for q in 0..dim {
                let mut s = C64::new(0.0, 0.0);
                for (a, sa) in idx(p) {
                    for (b, sb) in idx(q) {
                        s += pair(a, b) * (sa * sb);
                    }
                }
                raw[p * dim + q] = s;
            }
        }
        let mut g = vec![C64::new(0.0, 0.0); dim * dim];
        for p in 0..dim {
            for q in 0..dim {
                if p != q {
                    g[p * dim + q] = (raw[p * dim + q] - raw[q * dim + p]) * 0.5;
                }
            }
        }
        MajoranaCorrelations { g, dim }
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.g)
    }

    pub fn n_sites(&self) -> usize {
        self.dim / 2
    }

    fn block_pfaffian(&self, lo: usize, hi: usize, buf: &mut Vec<C64>) -> C64 {
        let m = hi - lo;
        buf.clear();
        for p in lo..hi {
            buf.extend_from_slice(&self.g[p * self.dim + lo..p * self.dim + hi]);
        }
        pfaffian_in_place(buf, m)
    }

    /// `<sigma^x_i sigma^x_j>` for sites `i < j` (0-based).
    pub fn xx(&self, i: usize, j: usize) -> Result<C64> {
        if !(i < j && j < self.n_sites()) {
            return invalid(format!("need i < j < N, got i={i}, j={j}, N={}", self.n_sites()));
        }
        Ok(self.block_pfaffian(2 * i + 1, 2 * j + 1, &mut Vec::new()))
    }

    /// Full `<sigma^x_i sigma^x_j>` table (diagonal set to 1), rows computed in parallel.
    pub fn xx_table(&self) -> DMatrix<C64> {
        let n = self.n_sites();
        let rows: Vec<Vec<C64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut buf = Vec::new();
                (0..n)
                    .map(|j| {
                        if j > i {
                            self.block_pfaffian(2 * i + 1, 2 * j + 1, &mut buf)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut t = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        for i in 0..n {
            t[(i, i)] = C64::new(1.0, 0.0);
            for j in 0..i {
                t[(i, j)] = t[(j, i)];
            }
        }
        t
    }
}

pub fn xx_correlator(state: &GaussianState, i: usize, j: usize) -> Result<C64> {
    MajoranaCorrelations::new(state).xx(i, j)
}

/// `F = 4 Var(S_x) = N + 2 sum_{i<j} Re <sigma^x_i sigma^x_j>`, using `<S_x> = 0`.
///
/// Pair values are computed in parallel and summed in row-major order.
pub fn witness_qfi(state: &GaussianState) -> f64 {
    let corr = MajoranaCorrelations::new(state);
    let n = corr.n_sites();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut buf = Vec::new();
            (i + 1..n)
                .map(|j| corr.block_pfaffian(2 * i + 1, 2 * j + 1, &mut buf).re)
                .sum()
        })
        .collect();
    n as f64 + 2.0 * rows.iter().sum::<f64>()
}

/// `<n_i>` for every site.
pub fn occupations(state: &GaussianState) -> Vec<f64> {
    let n = state.n_sites();
    let w = state.frame();
    (0..n)
        .map(|i| (0..n).map(|m| w[(n + i, m)].norm_sqr()).sum())
        .collect()
}

/// `<H>` of the open chain `-sum sigma^x_i sigma^x_{i+1} - h sum sigma^z_i`.
pub fn energy(state: &GaussianState, h: f64) -> f64 {
    let corr = MajoranaCorrelations::new(state);
    let n = state.n_sites();
    let bonds: f64 = (0..n - 1).map(|i| corr.xx(i, i + 1).map(|z| z.re).unwrap_or(0.0)).sum();
    let field: f64 = occupations(state).iter().map(|x| 2.0 * x - 1.0).sum();
    -bonds - h * field
}

/// Largest `m + 1` with `F / N > m`; 1 when nothing is certified.
pub fn entanglement_depth(f: f64, n_sites: usize) -> usize {
    let ratio = f / n_sites as f64;
    if !(ratio > 1.0) {
        return 1;
    }
    (ratio.ceil() as usize).clamp(1, n_sites)
}
