//! Pfaffians of complex antisymmetric matrices by Parlett-Reid elimination with pivoting.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::mat2::C64;

/// Pfaffian of an even-dimensional antisymmetric matrix.
///
/// The input is checked for antisymmetry to `1e-10` relative to its largest entry.
pub fn pfaffian(a: &DMatrix<C64>) -> Result<C64> {
    let n = a.nrows();
    if a.ncols() != n {
        return invalid("pfaffian needs a square matrix");
    }
    if n % 2 != 0 {
        return invalid(format!("pfaffian needs an even dimension, got {n}"));
    }
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in 0..=i {
            if (a[(i, j)] + a[(j, i)]).norm() > 1e-10 * scale {
                return invalid(format!("matrix is not antisymmetric at ({i}, {j})"));
            }
        }
    }
    let mut buf: Vec<C64> = (0..n * n).map(|idx| a[(idx / n, idx % n)]).collect();
    Ok(pfaffian_in_place(&mut buf, n))
}

/// Row-major, unchecked variant; destroys `buf`.
pub fn pfaffian_in_place(buf: &mut [C64], n: usize) -> C64 {
    debug_assert_eq!(buf.len(), n * n);
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    if n % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        // pivot: largest entry in column k below the diagonal
        let mut kp = k + 1;
        let mut best = buf[(k + 1) * n + k].norm();
        for i in k + 2..n {
            let v = buf[i * n + k].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                buf.swap((k + 1) * n + j, kp * n + j);
            }
            for i in 0..n {
                buf.swap(i * n + k + 1, i * n + kp);
            }
            pf = -pf;
        }
        let piv = buf[k * n + k + 1];
        if piv == C64::new(0.0, 0.0) {
            return C64::new(0.0, 0.0);
        }
        pf *= piv;
        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| buf[k * n + j] / piv).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| buf[i * n + k + 1]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                let row = &mut buf[i * n..(i + 1) * n];
                for (jj, j) in (k + 2..n).enumerate() {
                    row[j] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}
