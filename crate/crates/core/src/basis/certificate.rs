use std::fmt;

use super::{complement_projector, BasisSet, Members, ORTHONORMAL_TOL};
use crate::error::Result;
use crate::numerics::{hermitian_eig, partial_trace, TraceOut};
use crate::states::BipartiteState;

/// Eigenvalues above this count towards a marginal's support rank.
pub const SUPPORT_RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMethod {
    SupportRank,
    NumericSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No maximally entangled state is orthogonal to the set (proved).
    Unextendible,
    /// A maximally entangled state orthogonal to the set was found.
    Extendible,
    Inconclusive,
}

impl fmt::Display for CertificateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SupportRank => "support-rank",
            Self::NumericSearch => "numeric-search",
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unextendible => "unextendible",
            Self::Extendible => "extendible",
            Self::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of an unextendibility check on the ME-flagged members of a basis.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub method: CertificateMethod,
    /// Rank of the complement projector.
    pub complement_dimension: usize,
    /// Rank of `Tr_A P` (support of complement states on the d' side).
    pub b_support_rank: usize,
    /// Rank of `Tr_B P` (support on the d side).
    pub a_support_rank: usize,
    /// Upper bound on the Schmidt rank of any complement state.
    pub schmidt_rank_bound: usize,
    pub verdict: Verdict,
    /// Present iff `verdict == Extendible`.
    pub witness: Option<BipartiteState>,
    /// Best fully-entangled overlap reached by the numeric search, if it ran.
    pub best_f: Option<f64>,
}

fn rank_above(m: &crate::numerics::ComplexMatrix, threshold: f64) -> Result<usize> {
    Ok(hermitian_eig(m)?.eigenvalues.iter().filter(|&&l| l > threshold).count())
}

/// Bounds the Schmidt rank of every state in the complement of the
/// ME-flagged members by the ranks of the two marginals of the complement
/// projector `P`.
///
/// If `|ψ⟩` lies in range(P) then `|ψ⟩⟨ψ| ≤ P`, so each reduced state of ψ is
/// supported inside the corresponding marginal of P. A bound below `d` rules
/// out maximally entangled complement states; otherwise the verdict is
/// inconclusive and a numeric search has to decide.
pub fn support_rank_certificate(basis: &BasisSet) -> Result<CertificateReport> {
    basis.ensure_orthonormal(ORTHONORMAL_TOL)?;
    let (d, dprime) = basis.dims();
    let p = complement_projector(basis, Members::MaximallyEntangled);
    let complement_dimension = rank_above(&p, 0.5)?;
    let b_support_rank = rank_above(&partial_trace(&p, d, dprime, TraceOut::A)?, SUPPORT_RANK_THRESHOLD)?;
    let a_support_rank = rank_above(&partial_trace(&p, d, dprime, TraceOut::B)?, SUPPORT_RANK_THRESHOLD)?;
    let schmidt_rank_bound = d.min(a_support_rank).min(b_support_rank);
    let verdict = if schmidt_rank_bound < d {
        Verdict::Unextendible
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport {
        method: CertificateMethod::SupportRank,
        complement_dimension,
        b_support_rank,
        a_support_rank,
        schmidt_rank_bound,
        verdict,
        witness: None,
        best_f: None,
    })
}
