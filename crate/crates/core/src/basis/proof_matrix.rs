//! The `d² x d²` coefficient matrix `M` of the orthogonality system
//! `⟨Φ_nm|Ψ⟩ = 0` for a candidate `|Ψ⟩ = (U ⊗ V) Σ_p √λ_p |p⟩|p'⟩`.
//!
//! Writing `v` for the top-left `d x d` block of `V` flattened row by row,
//! the `d²` overlaps satisfy `M v = √d · (⟨Φ_nm|Ψ⟩)_{n,m}` with
//!
//! ```text
//! M[(n,m),(k,p)] = ζ^{−nk} · U[(m+k) mod d, p] · √λ_p
//! ```
//!
//! which factors as `(F ⊗ I) · diag(I, A, …, A^{d−1}) · diag(U, …, U) · diag(W, …, W)`
//! with `F[n,k] = ζ^{−nk}`, `A` the cyclic shift and `W = diag(√λ_p)`. Every
//! factor is invertible, so `M v = 0` forces `v = 0`.

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::numerics::{kron, ComplexMatrix, ONE};
use crate::states::root_of_unity;

#[derive(Debug, Clone)]
pub struct ProofMatrix {
    pub m: ComplexMatrix,
    /// `|det M|` from the factor determinants:
    /// `d^{d²/2} · |det U|^d · (Π λ_p)^{d/2}`.
    pub det_abs_factored: f64,
}

fn check_inputs(u: &ComplexMatrix, lambdas: &[f64], d: usize) -> Result<()> {
    ensure!(d >= 1, "dimension must be positive");
    ensure!(u.shape() == (d, d), "U must be {d}x{d}, got {}x{}", u.rows(), u.cols());
    ensure!(
        u.unitarity_error() <= 1e-9,
        "U is not unitary (error {:.3e})",
        u.unitarity_error()
    );
    ensure!(lambdas.len() == d, "expected {d} weights, got {}", lambdas.len());
    ensure!(
        lambdas.iter().all(|&l| l > 0.0 && l.is_finite()),
        "weights must be strictly positive"
    );
    let sum: f64 = lambdas.iter().sum();
    ensure!((sum - 1.0).abs() <= 1e-9, "weights must sum to 1, got {sum}");
    Ok(())
}

fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    out
}

/// Cyclic shift with ones at `(i, i+1)` and `(d−1, 0)`.
pub(crate) fn cyclic_shift(d: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        a[(i, (i + 1) % d)] = ONE;
    }
    a
}

/// Assembles `M` as the product of its four structured factors and returns it
/// together with the factor-product value of `|det M|`.
pub fn assemble_m(u: &ComplexMatrix, lambdas: &[f64], d: usize) -> Result<ProofMatrix> {
    check_inputs(u, lambdas, d)?;
    let dft = ComplexMatrix::from_fn(d, d, |n, k| root_of_unity(d, n * k).conj());
    let f_block = kron(&dft, &ComplexMatrix::identity(d));

    let shift = cyclic_shift(d);
    let mut powers = Vec::with_capacity(d);
    let mut acc = ComplexMatrix::identity(d);
    for _ in 0..d {
        powers.push(acc.clone());
        acc = acc.matmul(&shift);
    }
    let shifts = block_diag(&powers);
    let unitaries = block_diag(&vec![u.clone(); d]);
    let w: Vec<Complex64> = lambdas.iter().map(|l| Complex64::new(l.sqrt(), 0.0)).collect();
    let weights = block_diag(&vec![ComplexMatrix::diagonal(&w); d]);

    let m = f_block.matmul(&shifts).matmul(&unitaries).matmul(&weights);

    let df = d as f64;
    let det_u = u.determinant()?.norm();
    let prod_lambda: f64 = lambdas.iter().product();
    let det_abs_factored = df.powf(df * df / 2.0) * det_u.powi(d as i32) * prod_lambda.powf(df / 2.0);
    Ok(ProofMatrix { m, det_abs_factored })
}

/// `M` written out entry by entry from the block form
/// `M[(n,·),(k,·)] = ζ^{−nk} A^k U W`.
pub fn proof_matrix_direct(u: &ComplexMatrix, lambdas: &[f64], d: usize) -> Result<ComplexMatrix> {
    check_inputs(u, lambdas, d)?;
    Ok(ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (n, m) = (row / d, row % d);
        let (k, p) = (col / d, col % d);
        root_of_unity(d, n * k).conj() * u[((m + k) % d, p)] * lambdas[p].sqrt()
    }))
}
