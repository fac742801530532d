//! Construction and certification of unextendible maximally entangled bases
//! (UMEBs) in C^d ⊗ C^d'.
//!
//! The crate is layered bottom-up:
//!
//! - [`numerics`]: dense complex SVD, Hermitian eigensolver, Kronecker
//!   products, partial traces and entropies.
//! - [`states`]: bipartite pure states, Schmidt analysis and Weyl operators.
//! - [`basis`]: the Weyl-family and 2⊗3 bases, Gram and complement
//!   projectors, the support-rank certificate and the proof matrix `M`.
//! - [`search`]: alternating-projection search for a maximally entangled
//!   state inside a subspace, and the combined [`search::certify`] pipeline.
//! - [`channel`]: the complement state ρ⊥ read as a Choi state.
//! - [`mub`]: mutual-unbiasedness checks between complete bases.

pub mod basis;
pub mod channel;
pub mod error;
pub mod mub;
pub mod numerics;
pub mod random;
pub mod search;
pub mod states;

pub use basis::{BasisSet, CertificateMethod, CertificateReport, Verdict};
pub use channel::ChannelReport;
pub use error::{Error, Result};
pub use mub::OverlapReport;
pub use num_complex::Complex64;
pub use numerics::ComplexMatrix;
pub use search::{SearchConfig, SearchResult, SearchVerdict};
pub use states::{BipartiteState, SchmidtDecomposition};
