//! Dense complex linear algebra kernel.

mod eig;
mod matrix;
mod ops;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_with_tol, HermitianEig, DEFAULT_HERMITIAN_TOL};
pub use matrix::{ComplexMatrix, ONE, ZERO};
pub use ops::{kron, partial_trace, von_neumann_entropy, TraceOut, ENTROPY_CLIP};
pub use svd::{svd, Svd};
