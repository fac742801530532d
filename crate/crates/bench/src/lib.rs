//! Shared fixtures for the criterion benchmarks.

use umeb_core::basis::{build_weyl_umeb, complement_projector, BasisSet, Members};
use umeb_core::ComplexMatrix;

/// Weyl-family basis and its complement projector.
pub fn weyl_fixture(d: usize, dprime: usize) -> (BasisSet, ComplexMatrix) {
    let basis = build_weyl_umeb(d, dprime).expect("valid Weyl dimensions");
    let p = complement_projector(&basis, Members::MaximallyEntangled);
    (basis, p)
}
