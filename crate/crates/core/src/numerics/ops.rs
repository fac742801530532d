use super::eig::hermitian_eig_with_tol;
use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{ensure, Result};

/// Eigenvalues at or below this are treated as exact zeros in the entropy.
pub const ENTROPY_CLIP: f64 = 1e-12;

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOut {
    /// Trace out the `d`-dimensional first factor, leaving a `d' x d'` operator.
    A,
    /// Trace out the `d'`-dimensional second factor, leaving a `d x d` operator.
    B,
}

/// Kronecker product: `(A⊗B)[i·rB+k, j·cB+l] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial trace of an operator on C^d ⊗ C^d' with index `(i, j) ↦ i·d' + j`.
pub fn partial_trace(rho: &ComplexMatrix, d: usize, dprime: usize, side: TraceOut) -> Result<ComplexMatrix> {
    let n = d * dprime;
    ensure!(
        rho.shape() == (n, n),
        "partial trace expects a {n}x{n} operator for {d}⊗{dprime}, got {}x{}",
        rho.rows(),
        rho.cols()
    );
    Ok(match side {
        TraceOut::B => ComplexMatrix::from_fn(d, d, |i, ip| {
            (0..dprime).map(|j| rho[(i * dprime + j, ip * dprime + j)]).sum()
        }),
        TraceOut::A => ComplexMatrix::from_fn(dprime, dprime, |j, jp| {
            (0..d).map(|i| rho[(i * dprime + j, i * dprime + jp)]).sum()
        }),
    })
}

/// Von Neumann entropy `−Σ λ log λ` in the given logarithm base.
///
/// `rho` must be Hermitian positive semidefinite with unit trace, each
/// within 1e-9. Eigenvalues at or below [`ENTROPY_CLIP`] contribute zero.
pub fn von_neumann_entropy(rho: &ComplexMatrix, log_base: f64) -> Result<f64> {
    ensure!(
        log_base > 0.0 && log_base != 1.0 && log_base.is_finite(),
        "invalid logarithm base {log_base}"
    );
    let tr = rho.trace();
    ensure!(
        (tr.re - 1.0).abs() <= 1e-9 && tr.im.abs() <= 1e-9,
        "density matrix trace is {tr}, expected 1"
    );
    let eig = hermitian_eig_with_tol(rho, 1e-9)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    ensure!(min >= -1e-9, "density matrix has negative eigenvalue {min:.3e}");
    let ln_base = log_base.ln();
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > ENTROPY_CLIP)
        .map(|&l| -l * l.ln() / ln_base)
        .sum::<f64>()
        .max(0.0))
}
