//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{ensure, Error, Result};

/// Inputs further than this from Hermitian (max entrywise) are rejected.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    hermitian_eig_with_tol(m, DEFAULT_HERMITIAN_TOL)
}

/// Decomposes `m` after symmetrizing it; fails if `m` is not square or its
/// Hermiticity error exceeds `tol` (scaled by max(1, ‖m‖_max)).
pub fn hermitian_eig_with_tol(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    ensure!(
        m.is_square(),
        "hermitian_eig needs a square matrix, got {}x{}",
        m.rows(),
        m.cols()
    );
    ensure!(m.rows() > 0, "hermitian_eig of an empty matrix");
    let herr = m.hermiticity_error();
    ensure!(
        herr <= tol * m.max_abs().max(1.0),
        "matrix is not Hermitian (deviation {herr:.3e} > {tol:.1e})"
    );
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s
    };
    let scale = a.frobenius_norm().powi(2);
    let target = (f64::EPSILON * n as f64).powi(2) * scale;

    let mut converged = n < 2 || off(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / g; // e^{iφ}
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, phase);
            }
        }
        converged = off(&a) <= target;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Hermitian Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]).then(x.cmp(&y)));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// A ← Q† A Q and V ← V Q where Q acts on (p, q) as
/// `[[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let n = a.rows();
    let ph = phase.conj();
    // columns
    for i in 0..n {
        let x = a[(i, p)];
        let y = a[(i, q)] * ph;
        a[(i, p)] = x * c - y * s;
        a[(i, q)] = x * s + y * c;
        let x = v[(i, p)];
        let y = v[(i, q)] * ph;
        v[(i, p)] = x * c - y * s;
        v[(i, q)] = x * s + y * c;
    }
    // rows
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)] * phase;
        a[(p, j)] = x * c - y * s;
        a[(q, j)] = x * s + y * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
