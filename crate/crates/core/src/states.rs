//! Bipartite pure states on C^d ⊗ C^d', their Schmidt analysis, and the
//! Weyl (generalized Pauli) operators.
//!
//! Amplitudes use the A-major index convention `|i⟩⊗|j'⟩ ↦ i·d' + j`, so the
//! reshaped `d x d'` coefficient matrix has the Schmidt coefficients as its
//! singular values.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::numerics::{kron, svd, ComplexMatrix, ZERO};

/// Norm tolerance accepted by [`BipartiteState::new`].
pub const NORM_TOL: f64 = 1e-9;
/// Default tolerance for [`BipartiteState::is_maximally_entangled`].
pub const DEFAULT_ME_TOL: f64 = 1e-8;
/// Unitarity tolerance for [`apply_local`].
pub const UNITARY_TOL: f64 = 1e-9;

/// Unit vector in C^d ⊗ C^d' with `2 <= d <= d'`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    d: usize,
    dprime: usize,
    amplitudes: Vec<Complex64>,
}

impl BipartiteState {
    /// Wraps `amplitudes`, requiring unit norm within [`NORM_TOL`].
    pub fn new(d: usize, dprime: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::new_unchecked_norm(d, dprime, amplitudes)?;
        let norm = state.norm();
        ensure!(
            (norm - 1.0).abs() <= NORM_TOL,
            "state norm is {norm}, expected 1 within {NORM_TOL:e}"
        );
        Ok(state)
    }

    /// Wraps `amplitudes` and rescales them to unit norm.
    pub fn normalized(d: usize, dprime: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::new_unchecked_norm(d, dprime, amplitudes)?;
        let norm = state.norm();
        ensure!(norm > 1e-300, "cannot normalize the zero vector");
        for z in state.amplitudes.iter_mut() {
            *z /= norm;
        }
        Ok(state)
    }

    fn new_unchecked_norm(d: usize, dprime: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        ensure!(d >= 2, "A-side dimension must be at least 2, got {d}");
        ensure!(d <= dprime, "A side must be the smaller factor, got {d}⊗{dprime}");
        ensure!(
            amplitudes.len() == d * dprime,
            "expected {} amplitudes for {d}⊗{dprime}, got {}",
            d * dprime,
            amplitudes.len()
        );
        ensure!(
            amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "amplitudes must be finite"
        );
        Ok(Self { d, dprime, amplitudes })
    }

    /// Product state |a⟩⊗|b⟩; both factors are normalized.
    pub fn product(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::normalized(a.len(), b.len(), amps)
    }

    /// |i⟩|j'⟩.
    pub fn basis(d: usize, dprime: usize, i: usize, j: usize) -> Result<Self> {
        ensure!(
            i < d && j < dprime,
            "basis index ({i},{j}) out of range for {d}⊗{dprime}"
        );
        let mut amps = vec![ZERO; d * dprime];
        amps[i * dprime + j] = Complex64::new(1.0, 0.0);
        Self::new(d, dprime, amps)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dprime(&self) -> usize {
        self.dprime
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d, self.dprime)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Equality up to a global phase: `|⟨a|b⟩| ≥ 1 − tol`.
    pub fn equals_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        self.dims() == other.dims() && self.inner(other).norm() >= 1.0 - tol
    }

    /// The `d x d'` coefficient matrix `X[i,j] = ψ[i·d' + j]`.
    pub fn reshape_to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d, self.dprime, |i, j| self.amplitudes[i * self.dprime + j])
    }

    pub fn from_matrix(x: &ComplexMatrix) -> Result<Self> {
        Self::new(x.rows(), x.cols(), x.as_slice().to_vec())
    }

    pub fn schmidt(&self) -> Result<SchmidtDecomposition> {
        let s = svd(&self.reshape_to_matrix())?;
        // ψ = Σ_p s_p |l_p⟩ ⊗ |r_p⟩ with |r_p⟩ the p-th row of right_dagger
        let right_vectors = s.right_dagger.transpose();
        Ok(SchmidtDecomposition {
            coefficients: s.singular_values,
            left_vectors: s.left,
            right_vectors,
        })
    }

    /// Number of Schmidt coefficients strictly above `tol`.
    pub fn schmidt_rank(&self, tol: f64) -> Result<usize> {
        ensure!(
            tol > 0.0 && tol < 1.0,
            "Schmidt rank tolerance must lie in (0, 1), got {tol}"
        );
        Ok(self.schmidt()?.rank(tol))
    }

    /// Returns `(flag, deviation)` with `deviation = max_p |s_p − 1/√d|` and
    /// `flag = deviation <= tol`.
    pub fn is_maximally_entangled(&self, tol: f64) -> Result<(bool, f64)> {
        let dev = self.schmidt()?.me_deviation();
        Ok((dev <= tol, dev))
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Schmidt form `ψ = Σ_p s_p |l_p⟩|r_p⟩`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// `s_p`, descending, length `d`. The squared values are the λ_p weights.
    pub coefficients: Vec<f64>,
    /// `d x d`, column `p` is `|l_p⟩`.
    pub left_vectors: ComplexMatrix,
    /// `d' x d`, column `p` is `|r_p⟩`.
    pub right_vectors: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&s| s > tol).count()
    }

    /// `max_p |s_p − 1/√d|`.
    pub fn me_deviation(&self) -> f64 {
        let target = 1.0 / (self.coefficients.len() as f64).sqrt();
        self.coefficients.iter().map(|s| (s - target).abs()).fold(0.0, f64::max)
    }

    /// `λ_p = s_p²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients.iter().map(|s| s * s).collect()
    }
}

/// Weyl operator `U_nm = Σ_k ζ^{nk} |k⊕m⟩⟨k|`, `ζ = e^{2πi/d}`.
pub fn weyl_operator(d: usize, n: usize, m: usize) -> Result<ComplexMatrix> {
    ensure!(d >= 1, "Weyl operator dimension must be positive");
    ensure!(n < d && m < d, "Weyl indices ({n},{m}) out of range for d = {d}");
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        u[((k + m) % d, k)] = root_of_unity(d, n * k);
    }
    Ok(u)
}

/// `ζ_d^power` with the exponent reduced mod d before evaluating.
pub fn root_of_unity(d: usize, power: usize) -> Complex64 {
    let p = power % d;
    // exact values at multiples of a quarter turn
    if (4 * p).is_multiple_of(d) {
        return match 4 * p / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * p as f64 / d as f64)
}

/// `|Φ⟩ = (1/√d) Σ_p |p⟩|p'⟩`.
pub fn standard_mes(d: usize, dprime: usize) -> Result<BipartiteState> {
    ensure!(
        d >= 2 && d <= dprime,
        "standard MES needs 2 <= d <= d', got {d}⊗{dprime}"
    );
    let mut amps = vec![ZERO; d * dprime];
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for p in 0..d {
        amps[p * dprime + p] = a;
    }
    BipartiteState::new(d, dprime, amps)
}

/// `(op_a ⊗ op_b)|ψ⟩`, requiring both operators unitary within [`UNITARY_TOL`].
pub fn apply_local(psi: &BipartiteState, op_a: &ComplexMatrix, op_b: &ComplexMatrix) -> Result<BipartiteState> {
    ensure!(
        op_a.unitarity_error() <= UNITARY_TOL,
        "A-side operator is not unitary (error {:.3e})",
        op_a.unitarity_error()
    );
    ensure!(
        op_b.unitarity_error() <= UNITARY_TOL,
        "B-side operator is not unitary (error {:.3e})",
        op_b.unitarity_error()
    );
    let amps = apply_local_unchecked(psi, op_a, op_b)?;
    BipartiteState::new(psi.d, psi.dprime, amps)
}

/// `(op_a ⊗ op_b)|ψ⟩` as raw amplitudes, without unitarity or norm checks.
pub(crate) fn apply_local_unchecked(
    psi: &BipartiteState,
    op_a: &ComplexMatrix,
    op_b: &ComplexMatrix,
) -> Result<Vec<Complex64>> {
    ensure!(
        op_a.shape() == (psi.d, psi.d),
        "A-side operator must be {0}x{0}, got {1}x{2}",
        psi.d,
        op_a.rows(),
        op_a.cols()
    );
    ensure!(
        op_b.shape() == (psi.dprime, psi.dprime),
        "B-side operator must be {0}x{0}, got {1}x{2}",
        psi.dprime,
        op_b.rows(),
        op_b.cols()
    );
    // (A ⊗ B) vec(X) = vec(A X Bᵀ) in row-major reshaping
    let x = psi.reshape_to_matrix();
    let y = op_a.matmul(&x).matmul(&op_b.transpose());
    Ok(y.into_vec())
}

/// Full operator `op_a ⊗ op_b` acting on the amplitudes; used as a reference.
pub fn local_operator(op_a: &ComplexMatrix, op_b: &ComplexMatrix) -> ComplexMatrix {
    kron(op_a, op_b)
}
