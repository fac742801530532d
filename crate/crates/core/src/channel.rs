//! The normalized complement state ρ⊥ of a `d²`-member maximally entangled
//! set, read as the Choi state of a map Λ from operators on C^d to operators
//! on C^d'.
//!
//! Naming follows the UMEB literature rather than the usual "reduced state of
//! subsystem X" convention: `marginal_a = Tr_A ρ⊥` is the `d' x d'` operator
//! left after tracing out the d side, and `marginal_b = Tr_B ρ⊥` is `d x d`.
//! Λ is trace preserving iff `Tr_B ρ⊥ = I_d/d` and unital iff
//! `Tr_A ρ⊥ = I_d'/d'`.

use crate::basis::{complement_projector, BasisSet, Members, ORTHONORMAL_TOL};
use crate::error::{ensure, Result};
use crate::numerics::{kron, partial_trace, von_neumann_entropy, ComplexMatrix, TraceOut};

#[derive(Debug, Clone)]
pub struct ChannelReport {
    pub rho_perp: ComplexMatrix,
    /// `Tr_A ρ⊥`, `d' x d'`.
    pub marginal_a: ComplexMatrix,
    /// `Tr_B ρ⊥`, `d x d`.
    pub marginal_b: ComplexMatrix,
    /// `‖Tr_B ρ⊥ − I_d/d‖_F`.
    pub trace_preserving_deviation: f64,
    /// `‖Tr_A ρ⊥ − I_d'/d'‖_F`.
    pub unitality_deviation: f64,
    /// `S(Tr_A ρ⊥)`.
    pub entropy_a: f64,
    /// `S(Tr_B ρ⊥)`.
    pub entropy_b: f64,
    pub log_base: f64,
}

/// `ρ⊥ = (I − Σ|Φ_i⟩⟨Φ_i|) / (dd' − d²)` over the ME-flagged members.
pub fn rho_perp(basis: &BasisSet) -> Result<ComplexMatrix> {
    rho_perp_over(basis, Members::MaximallyEntangled)
}

/// [`rho_perp`] over an explicit member selection, which must contain
/// exactly `d²` states.
pub fn rho_perp_over(basis: &BasisSet, which: Members) -> Result<ComplexMatrix> {
    let (d, dprime) = basis.dims();
    let used = basis.members(which).count();
    ensure!(
        used == d * d,
        "complement state needs exactly d² = {} members, got {used}",
        d * d
    );
    ensure!(dprime > d, "complement state needs d' > d, got {d}⊗{dprime}");
    basis.ensure_orthonormal(ORTHONORMAL_TOL)?;
    let p = complement_projector(basis, which);
    Ok(p.scale_real(1.0 / (d * dprime - d * d) as f64))
}

/// `Λ(X) = d · Tr_A[(Xᵀ ⊗ I_d') ρ]` for a `d x d` input `X`.
pub fn apply_channel(rho_choi: &ComplexMatrix, x: &ComplexMatrix, d: usize, dprime: usize) -> Result<ComplexMatrix> {
    let n = d * dprime;
    ensure!(rho_choi.shape() == (n, n), "Choi state must be {n}x{n}");
    ensure!(
        x.shape() == (d, d),
        "channel input must be {d}x{d}, got {}x{}",
        x.rows(),
        x.cols()
    );
    let lifted = kron(&x.transpose(), &ComplexMatrix::identity(dprime)).matmul(rho_choi);
    Ok(partial_trace(&lifted, d, dprime, TraceOut::A)?.scale_real(d as f64))
}

pub fn analyze(basis: &BasisSet, log_base: f64) -> Result<ChannelReport> {
    analyze_over(basis, Members::MaximallyEntangled, log_base)
}

pub fn analyze_over(basis: &BasisSet, which: Members, log_base: f64) -> Result<ChannelReport> {
    let (d, dprime) = basis.dims();
    let rho = rho_perp_over(basis, which)?;
    let marginal_a = partial_trace(&rho, d, dprime, TraceOut::A)?;
    let marginal_b = partial_trace(&rho, d, dprime, TraceOut::B)?;
    let mixed_b = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let mixed_a = ComplexMatrix::identity(dprime).scale_real(1.0 / dprime as f64);
    Ok(ChannelReport {
        trace_preserving_deviation: marginal_b.distance(&mixed_b),
        unitality_deviation: marginal_a.distance(&mixed_a),
        entropy_a: von_neumann_entropy(&marginal_a, log_base)?,
        entropy_b: von_neumann_entropy(&marginal_b, log_base)?,
        rho_perp: rho,
        marginal_a,
        marginal_b,
        log_base,
    })
}
