//! Orthonormal sets of bipartite states: the Weyl-family UMEBs, the two
//! complete 2⊗3 bases, Gram and complement projectors, and unextendibility
//! certificates.

mod certificate;
mod proof_matrix;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

pub use certificate::{
    support_rank_certificate, CertificateMethod, CertificateReport, Verdict, SUPPORT_RANK_THRESHOLD,
};
pub use proof_matrix::{assemble_m, proof_matrix_direct, ProofMatrix};

use crate::error::{ensure, Result};
use crate::numerics::{ComplexMatrix, ONE, ZERO};
use crate::states::{apply_local, standard_mes, weyl_operator, BipartiteState, DEFAULT_ME_TOL};

/// Gram deviation tolerated by operations that require an orthonormal set.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// Which members of a basis enter the complement projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Members {
    /// Only members flagged maximally entangled.
    #[default]
    MaximallyEntangled,
    All,
}

/// Ordered set of states on a common C^d ⊗ C^d' with per-member
/// maximal-entanglement flags.
///
/// Construction checks dimensions and flags but not orthonormality, so that
/// a malformed set can still be inspected; operations that need an
/// orthonormal set check it themselves.
#[derive(Debug, Clone)]
pub struct BasisSet {
    d: usize,
    dprime: usize,
    states: Vec<BipartiteState>,
    labels: Option<Vec<String>>,
    me_flags: Vec<bool>,
}

impl BasisSet {
    /// Builds a set and computes every flag at [`DEFAULT_ME_TOL`].
    pub fn new(d: usize, dprime: usize, states: Vec<BipartiteState>, labels: Option<Vec<String>>) -> Result<Self> {
        let me_flags = states
            .iter()
            .map(|s| s.is_maximally_entangled(DEFAULT_ME_TOL).map(|(f, _)| f))
            .collect::<Result<Vec<_>>>()?;
        Self::with_flags(d, dprime, states, labels, me_flags)
    }

    /// Builds a set with caller-supplied flags, which must agree with the
    /// maximal-entanglement test at [`DEFAULT_ME_TOL`].
    pub fn with_flags(
        d: usize,
        dprime: usize,
        states: Vec<BipartiteState>,
        labels: Option<Vec<String>>,
        me_flags: Vec<bool>,
    ) -> Result<Self> {
        ensure!(
            d >= 2 && d <= dprime,
            "basis dimensions must satisfy 2 <= d <= d', got {d}⊗{dprime}"
        );
        for (k, s) in states.iter().enumerate() {
            ensure!(
                s.dims() == (d, dprime),
                "member {k} lives in {}⊗{}, expected {d}⊗{dprime}",
                s.d(),
                s.dprime()
            );
        }
        ensure!(me_flags.len() == states.len(), "one flag per member required");
        if let Some(l) = &labels {
            ensure!(l.len() == states.len(), "one label per member required");
        }
        for (k, (s, &flag)) in states.iter().zip(&me_flags).enumerate() {
            let (actual, dev) = s.is_maximally_entangled(DEFAULT_ME_TOL)?;
            ensure!(
                actual == flag,
                "member {k} flagged {} but its maximal-entanglement deviation is {dev:.3e}",
                if flag { "maximally entangled" } else { "auxiliary" }
            );
        }
        Ok(Self {
            d,
            dprime,
            states,
            labels,
            me_flags,
        })
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

    /// Dimension `d·d'` of the full space.
    pub fn space_dim(&self) -> usize {
        self.d * self.dprime
    }

    pub fn states(&self) -> &[BipartiteState] {
        &self.states
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn me_flags(&self) -> &[bool] {
        &self.me_flags
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn me_count(&self) -> usize {
        self.me_flags.iter().filter(|f| **f).count()
    }

    /// True when the set spans the whole space.
    pub fn is_complete(&self) -> bool {
        self.len() == self.space_dim()
    }

    pub fn members(&self, which: Members) -> impl Iterator<Item = &BipartiteState> {
        self.states
            .iter()
            .zip(&self.me_flags)
            .filter(move |(_, f)| which == Members::All || **f)
            .map(|(s, _)| s)
    }

    /// `max |G − I|` entrywise; zero for the empty set.
    pub fn orthonormality_error(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        (&gram_matrix_unchecked(self) - &ComplexMatrix::identity(self.len())).max_abs()
    }

    pub fn ensure_orthonormal(&self, tol: f64) -> Result<()> {
        let err = self.orthonormality_error();
        ensure!(
            err <= tol,
            "basis is not orthonormal (Gram deviation {err:.3e} > {tol:.1e})"
        );
        Ok(())
    }
}

/// `G[i,j] = ⟨state_i|state_j⟩`.
pub fn gram_matrix(basis: &BasisSet) -> Result<ComplexMatrix> {
    ensure!(!basis.is_empty(), "Gram matrix of an empty basis");
    Ok(gram_matrix_unchecked(basis))
}

fn gram_matrix_unchecked(basis: &BasisSet) -> ComplexMatrix {
    let n = basis.len();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = basis.states[i].inner(&basis.states[j]);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    for i in 0..n {
        g[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
    }
    g
}

/// `P = I − Σ |φ_i⟩⟨φ_i|` over the selected members.
pub fn complement_projector(basis: &BasisSet, which: Members) -> ComplexMatrix {
    let n = basis.space_dim();
    let mut p = ComplexMatrix::identity(n);
    for s in basis.members(which) {
        let a = s.amplitudes();
        for i in 0..n {
            if a[i] == ZERO {
                continue;
            }
            for j in 0..n {
                p[(i, j)] -= a[i] * a[j].conj();
            }
        }
    }
    p.hermitian_part()
}

/// `|Φ_nm⟩ = (U_nm ⊗ I)|Φ⟩` for all `n, m < d`, in lexicographic `(n, m)`
/// order. Requires `2 <= d < d'`.
pub fn build_weyl_umeb(d: usize, dprime: usize) -> Result<BasisSet> {
    ensure!(
        d >= 2 && d < dprime,
        "the Weyl construction needs 2 <= d < d', got {d}⊗{dprime}"
    );
    let phi = standard_mes(d, dprime)?;
    let id = ComplexMatrix::identity(dprime);
    let mut states = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for n in 0..d {
        for m in 0..d {
            states.push(apply_local(&phi, &weyl_operator(d, n, m)?, &id)?);
            labels.push(format!("Phi_{n}_{m}"));
        }
    }
    let flags = vec![true; states.len()];
    BasisSet::with_flags(d, dprime, states, Some(labels), flags)
}

/// Pauli matrix `σ_k` for `k = 0..=3`, with `σ_0 = I`.
pub fn pauli(k: usize) -> ComplexMatrix {
    let (z, o, i) = (ZERO, ONE, Complex64::new(0.0, 1.0));
    let data = match k {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, -i, i, z],
        3 => [o, z, z, -o],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_fn(2, 2, |r, c| data[r * 2 + c])
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The four 2⊗3 states `(σ_k ⊗ I₃)(|0⟩|a⟩ + |1⟩|b⟩)/√2`, `k = 0..=3`.
fn pauli_family(a: &[Complex64], b: &[Complex64]) -> Result<Vec<BipartiteState>> {
    let mut amps = Vec::with_capacity(6);
    amps.extend(a.iter().map(|z| z * FRAC_1_SQRT_2));
    amps.extend(b.iter().map(|z| z * FRAC_1_SQRT_2));
    let seed = BipartiteState::new(2, 3, amps)?;
    let id = ComplexMatrix::identity(3);
    (0..4).map(|k| apply_local(&seed, &pauli(k), &id)).collect()
}

/// The complete 2⊗3 basis built from `|φ_0⟩ = (|00'⟩ + |11'⟩)/√2`, its three
/// Pauli images, and two product states on `|2'⟩`.
pub fn build_23_first() -> Result<BasisSet> {
    let e = |k: usize| {
        let mut v = vec![ZERO; 3];
        v[k] = ONE;
        v
    };
    let mut states = pauli_family(&e(0), &e(1))?;
    let r3 = 3f64.sqrt() / 2.0;
    states.push(BipartiteState::product(&[c(0.5, 0.0), c(r3, 0.0)], &e(2))?);
    states.push(BipartiteState::product(&[c(r3, 0.0), c(-0.5, 0.0)], &e(2))?);
    let labels = (0..6).map(|k| format!("phi_{k}")).collect();
    BasisSet::with_flags(2, 3, states, Some(labels), vec![true, true, true, true, false, false])
}

/// The alternative basis `|x'⟩, |y'⟩, |z'⟩` of C³ used by [`build_23_second`].
pub fn c3_second_basis() -> [Vec<Complex64>; 3] {
    let s = 1.0 / 3f64.sqrt();
    let r3 = 3f64.sqrt();
    let w = c(0.5, r3 / 2.0); // (1 + √3 i)/2
    let x = vec![c(s, 0.0), w * s, c(s, 0.0)];
    let y = vec![c(-r3 / 2.0, 0.5) * s, c(0.0, s), c(0.0, -s)];
    let z = vec![c(-s, 0.0), c(s, 0.0), w * s];
    [x, y, z]
}

/// The complete 2⊗3 basis built on `|x'⟩, |y'⟩, |z'⟩`; mutually unbiased
/// with [`build_23_first`].
pub fn build_23_second() -> Result<BasisSet> {
    let [x, y, z] = c3_second_basis();
    let mut states = pauli_family(&x, &y)?;
    let r3 = 3f64.sqrt();
    let w = c(0.5, r3 / 2.0); // (1 + √3 i)/2
    let v = c(r3 / 2.0, -0.5); // (√3 − i)/2
    let h = FRAC_1_SQRT_2;
    states.push(BipartiteState::product(&[w * h, v * h], &z)?);
    states.push(BipartiteState::product(&[v * h, w * h], &z)?);
    let labels = (0..6).map(|k| format!("psi_{k}")).collect();
    BasisSet::with_flags(2, 3, states, Some(labels), vec![true, true, true, true, false, false])
}

/// The four Pauli-generated 2⊗3 states, without the product completion.
pub fn build_23_pauli_set() -> Result<BasisSet> {
    let first = build_23_first()?;
    let states = first.states()[..4].to_vec();
    let labels = (0..4).map(|k| format!("phi_{k}")).collect();
    BasisSet::with_flags(2, 3, states, Some(labels), vec![true; 4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::numerics::hermitian_eig;
    use crate::states::inner;

    fn identity_distance(g: &ComplexMatrix) -> f64 {
        (g - &ComplexMatrix::identity(g.rows())).max_abs()
    }

    #[test]
    fn first_2x3_basis_matches_printed_states() {
        let b = build_23_first().unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.me_count(), 4);
        let h = FRAC_1_SQRT_2;
        let expected = [c(h, 0.0), ZERO, ZERO, ZERO, c(h, 0.0), ZERO];
        assert_eq!(b.states()[0].amplitudes(), &expected);
        assert_eq!(b.states()[4].schmidt_rank(1e-8).unwrap(), 1);
        assert!(identity_distance(&gram_matrix(&b).unwrap()) < 1e-12);
    }

    #[test]
    fn second_2x3_basis() {
        let b = build_23_second().unwrap();
        assert!(identity_distance(&gram_matrix(&b).unwrap()) < 1e-12);
        assert_eq!(b.me_flags(), &[true, true, true, true, false, false]);
        let [x, y, z] = c3_second_basis();
        assert!(inner(&x, &y).norm() < 1e-12);
        assert!(inner(&x, &z).norm() < 1e-12);
        assert!(inner(&y, &z).norm() < 1e-12);
        let first = build_23_first().unwrap();
        let ov = first.states()[0].inner(&b.states()[0]).norm();
        assert!((ov - 1.0 / 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weyl_set_is_the_pauli_set_up_to_phases() {
        let weyl = build_weyl_umeb(2, 3).unwrap();
        let pauli = build_23_pauli_set().unwrap();
        for s in weyl.states() {
            let hits = pauli.states().iter().filter(|p| p.equals_up_to_phase(s, 1e-12)).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn weyl_constructions() {
        for (d, dp) in [(2, 3), (3, 4), (2, 4)] {
            let b = build_weyl_umeb(d, dp).unwrap();
            assert_eq!(b.len(), d * d);
            assert_eq!(b.me_count(), d * d);
            assert!(identity_distance(&gram_matrix(&b).unwrap()) < 1e-12);
        }
        assert!(matches!(build_weyl_umeb(3, 3), Err(Error::Contract(_))));
        assert!(build_weyl_umeb(1, 3).is_err());
    }

    #[test]
    fn gram_of_duplicate_state() {
        let s = BipartiteState::basis(2, 3, 0, 0).unwrap();
        let b = BasisSet::new(2, 3, vec![s.clone(), s], None).unwrap();
        let g = gram_matrix(&b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((g[(i, j)] - ONE).norm() < 1e-15);
            }
        }
        assert!((b.orthonormality_error() - 1.0).abs() < 1e-15);
        assert!(b.ensure_orthonormal(ORTHONORMAL_TOL).is_err());
        let empty = BasisSet::new(2, 2, vec![], None).unwrap();
        assert!(gram_matrix(&empty).is_err());
    }

    fn rank_and_eigs(p: &ComplexMatrix) -> (usize, Vec<f64>) {
        let e = hermitian_eig(p).unwrap();
        (e.eigenvalues.iter().filter(|l| **l > 0.5).count(), e.eigenvalues)
    }

    #[test]
    fn complement_of_pauli_set_is_c2_times_last_level() {
        let b = build_23_pauli_set().unwrap();
        let p = complement_projector(&b, Members::MaximallyEntangled);
        let mut expected = ComplexMatrix::zeros(6, 6);
        expected[(2, 2)] = ONE;
        expected[(5, 5)] = ONE;
        assert!(p.distance(&expected) < 1e-14);
        let (rank, _) = rank_and_eigs(&p);
        assert_eq!(rank, 2);
    }

    #[test]
    fn complement_of_complete_basis_is_zero() {
        let b = build_23_first().unwrap();
        assert!(complement_projector(&b, Members::All).max_abs() < 1e-14);
        let me_only = complement_projector(&b, Members::MaximallyEntangled);
        assert!((me_only.trace().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn complement_of_weyl_3x4() {
        let b = build_weyl_umeb(3, 4).unwrap();
        let p = complement_projector(&b, Members::MaximallyEntangled);
        let mut expected = ComplexMatrix::zeros(12, 12);
        for i in 0..3 {
            expected[(i * 4 + 3, i * 4 + 3)] = ONE;
        }
        assert!(p.distance(&expected) < 1e-13);
        assert!(p.matmul(&p).distance(&p) < 1e-13);
    }

    #[test]
    fn flags_must_match_states() {
        let s = BipartiteState::basis(2, 3, 0, 0).unwrap();
        assert!(BasisSet::with_flags(2, 3, vec![s.clone()], None, vec![true]).is_err());
        assert!(BasisSet::with_flags(2, 3, vec![s.clone()], None, vec![]).is_err());
        assert!(BasisSet::new(2, 3, vec![s.clone()], Some(vec![])).is_err());
        assert!(BasisSet::new(2, 4, vec![s], None).is_err());
    }

    #[test]
    fn pauli_matrices_are_unitary() {
        for k in 0..4 {
            assert!(pauli(k).unitarity_error() < 1e-15);
        }
    }
}
