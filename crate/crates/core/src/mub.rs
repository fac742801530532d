//! Mutual unbiasedness of complete orthonormal bases of C^d ⊗ C^d'.

use crate::basis::{BasisSet, ORTHONORMAL_TOL};
use crate::error::{ensure, Result};

pub const DEFAULT_MUB_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct OverlapReport {
    /// `d·d'`.
    pub dim: usize,
    /// `overlaps[i][j] = |⟨b_i|c_j⟩|`.
    pub overlaps: Vec<Vec<f64>>,
    /// `1/√dim`.
    pub target: f64,
    pub max_deviation: f64,
    pub is_mub: bool,
}

/// Overlap moduli between two complete bases, tested against `1/√(dd')`.
pub fn overlap_matrix(b1: &BasisSet, b2: &BasisSet, tol: f64) -> Result<OverlapReport> {
    ensure!(
        b1.dims() == b2.dims(),
        "bases live in different spaces: {}⊗{} vs {}⊗{}",
        b1.d(),
        b1.dprime(),
        b2.d(),
        b2.dprime()
    );
    let dim = b1.space_dim();
    ensure!(
        b1.is_complete() && b2.is_complete(),
        "mutual unbiasedness needs complete bases of {dim} members, got {} and {}",
        b1.len(),
        b2.len()
    );
    b1.ensure_orthonormal(ORTHONORMAL_TOL)?;
    b2.ensure_orthonormal(ORTHONORMAL_TOL)?;
    let target = 1.0 / (dim as f64).sqrt();
    let overlaps: Vec<Vec<f64>> = b1
        .states()
        .iter()
        .map(|b| b2.states().iter().map(|c| b.inner(c).norm().min(1.0)).collect())
        .collect();
    let max_deviation = overlaps
        .iter()
        .flatten()
        .map(|o| (o - target).abs())
        .fold(0.0, f64::max);
    Ok(OverlapReport {
        dim,
        overlaps,
        target,
        max_deviation,
        is_mub: max_deviation <= tol,
    })
}
