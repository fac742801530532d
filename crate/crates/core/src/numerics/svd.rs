//! Thin singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! For an `m x n` input with `k = min(m, n)` the result holds `left` (`m x k`,
//! orthonormal columns), `k` singular values in descending order and
//! `right_dagger` (`k x n`, orthonormal rows). One-sided Jacobi gives high
//! relative accuracy on the small dense matrices this crate deals with and is
//! deterministic for a fixed input.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{ensure, Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right_dagger: ComplexMatrix,
}

impl Svd {
    /// left · diag(σ) · right_dagger
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let mut scaled = self.left.clone();
        for j in 0..k {
            for i in 0..scaled.rows() {
                scaled[(i, j)] *= self.singular_values[j];
            }
        }
        scaled.matmul(&self.right_dagger)
    }

    /// Number of singular values strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.singular_values.iter().filter(|&&s| s > tol).count()
    }
}

/// Computes the thin SVD of `m`.
///
/// The largest-magnitude component of each left singular vector is made real
/// and nonnegative. Singular vectors belonging to degenerate singular values
/// are otherwise arbitrary.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    ensure!(m.rows() > 0 && m.cols() > 0, "svd of an empty matrix");
    ensure!(
        m.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        "svd input has non-finite entries"
    );
    if m.rows() >= m.cols() {
        let (u, s, v) = jacobi_tall(m)?;
        Ok(finish(u, s, v.adjoint()))
    } else {
        // A† = U' Σ V'†  ⇒  A = V' Σ U'†
        let (u, s, v) = jacobi_tall(&m.adjoint())?;
        Ok(finish(v, s, u.adjoint()))
    }
}

/// One-sided Jacobi on a matrix with rows >= cols. Returns (U, σ, V) with
/// A = U diag(σ) V†, sorted descending, U completed to orthonormal columns.
fn jacobi_tall(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (rows, n) = a.shape();
    // Work column-major for cache-friendly column rotations.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.col(j)).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    let fro = a.frobenius_norm();
    let floor = (eps * fro).powi(2);
    // a stricter threshold lets rounding noise rotate equal-norm columns forever
    let orth_tol = (rows as f64).sqrt() * eps;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha <= floor || beta <= floor || g <= orth_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g; // e^{iφ}
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s, phase);
                rotate_pair(&mut vcols, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));

    let sigma_max = norms[order[0]];
    let cutoff = sigma_max * (rows.max(n) as f64) * eps;
    let mut u = ComplexMatrix::zeros(rows, n);
    let mut v = ComplexMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut filled = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        v.set_col(k, &vcols[j]);
        let s = norms[j];
        if s > cutoff && s > 0.0 {
            let col: Vec<Complex64> = cols[j].iter().map(|z| z / s).collect();
            u.set_col(k, &col);
            filled.push(true);
            sigma.push(s);
        } else {
            // below round-off: the column is noise, its left vector arbitrary
            filled.push(false);
            sigma.push(0.0);
        }
    }
    complete_orthonormal_columns(&mut u, &filled);
    Ok((u, sigma, v))
}

/// Applies the column rotation
/// `p' = c·p − s·e^{-iφ}·q`, `q' = s·p + c·e^{-iφ}·q`.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let ph = phase.conj();
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yp = *y * ph;
        let nx = *x * c - yp * s;
        let ny = *x * s + yp * c;
        *x = nx;
        *y = ny;
    }
}

/// Fills the columns of `u` flagged `false` with unit vectors orthogonal to
/// all other columns, drawing candidates from the standard basis in order.
fn complete_orthonormal_columns(u: &mut ComplexMatrix, filled: &[bool]) {
    let rows = u.rows();
    let mut basis: Vec<Vec<Complex64>> = filled
        .iter()
        .enumerate()
        .filter(|(_, f)| **f)
        .map(|(j, _)| u.col(j))
        .collect();
    let mut candidate = 0usize;
    for (j, f) in filled.iter().enumerate() {
        if *f {
            continue;
        }
        loop {
            assert!(candidate < rows, "cannot complete orthonormal set");
            let mut e = vec![ZERO; rows];
            e[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 = b.iter().zip(&e).map(|(x, y)| x.conj() * y).sum();
                    for (ei, bi) in e.iter_mut().zip(b) {
                        *ei -= proj * bi;
                    }
                }
            }
            let norm = e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for z in e.iter_mut() {
                    *z /= norm;
                }
                u.set_col(j, &e);
                basis.push(e);
                break;
            }
        }
    }
}

/// Applies the phase convention and packages the result.
fn finish(mut left: ComplexMatrix, sigma: Vec<f64>, mut right_dagger: ComplexMatrix) -> Svd {
    for k in 0..sigma.len() {
        let col = left.col(k);
        let mut best = 0usize;
        for (i, z) in col.iter().enumerate() {
            // strict comparison with a small margin keeps the choice stable
            if z.norm() > col[best].norm() * (1.0 + 1e-12) {
                best = i;
            }
        }
        let pivot = col[best];
        if pivot.norm() == 0.0 {
            continue;
        }
        let phase = pivot.conj() / pivot.norm();
        for i in 0..left.rows() {
            left[(i, k)] *= phase;
        }
        left[(best, k)] = Complex64::new(left[(best, k)].re.max(0.0), 0.0);
        let back = phase.conj();
        for j in 0..right_dagger.cols() {
            right_dagger[(k, j)] *= back;
        }
    }
    Svd {
        left,
        singular_values: sigma,
        right_dagger,
    }
}
