//! Group twirls, the swap-twirl unitaries `U_π`, and trace distances between
//! finite pure-state ensembles.

use nalgebra::DMatrix;

use super::density::hermitian_eigenvalues;
use super::state::permute_index;
use super::{check_qubits, DensityMatrix, PureState, C64, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::permgroup::{PermGroup, Permutation};

/// A mixed state written as a finite convex combination of pure states.
#[derive(Clone, Debug)]
pub struct PureEnsemble {
    n: usize,
    components: Vec<(f64, PureState)>,
}

impl PureEnsemble {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let n = components
            .first()
            .map(|(_, s)| s.n_qubits())
            .ok_or_else(|| Error::InvalidInstance("empty ensemble".into()))?;
        if let Some((_, s)) = components.iter().find(|(_, s)| s.n_qubits() != n) {
            return Err(Error::DimensionMismatch { left: n, right: s.n_qubits() });
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInstance(format!("ensemble weights sum to {total}")));
        }
        Ok(Self { n, components })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    /// Dense density matrix; only available up to the density-matrix limit.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let terms = self
            .components
            .iter()
            .map(|(w, s)| Ok((*w, DensityMatrix::from_pure(s)?)))
            .collect::<Result<Vec<_>>>()?;
        DensityMatrix::mix(&terms)
    }

    /// `D(self, other)` computed inside the span of the component vectors.
    pub fn trace_distance(&self, other: &PureEnsemble) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let terms: Vec<(f64, &PureState)> = self
            .components
            .iter()
            .map(|(w, s)| (*w, s))
            .chain(other.components.iter().map(|(w, s)| (-*w, s)))
            .collect();
        Ok(signed_sum_trace_norm(&terms) / 2.0)
    }
}

/// Trace norm of `Σ c_i |v_i⟩⟨v_i|`.
///
/// With `V = [v_1 .. v_m]` and Gram matrix `G = V†V`, the operator `V C V†`
/// has the same nonzero spectrum as `G^{1/2} C G^{1/2}`, an `m × m` Hermitian
/// matrix, so the trace norm never needs the `2^n`-dimensional operator.
pub fn signed_sum_trace_norm(terms: &[(f64, &PureState)]) -> f64 {
    let m = terms.len();
    if m == 0 {
        return 0.0;
    }
    let mut gram = DMatrix::<C64>::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = terms[i].1.inner(terms[j].1).expect("same register");
            gram[(i, j)] = v;
            gram[(j, i)] = v.conj();
        }
    }
    let eig = gram.symmetric_eigen();
    // Rounding noise in the null space would otherwise surface as its square root.
    let tol = 1e-12 * eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let sqrt_diag = DMatrix::<C64>::from_diagonal(
        &eig.eigenvalues.map(|l| C64::new(if l > tol { l.sqrt() } else { 0.0 }, 0.0)),
    );
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.adjoint();
    let coeffs =
        DMatrix::<C64>::from_diagonal(&nalgebra::DVector::from_iterator(m, terms.iter().map(|(c, _)| C64::new(*c, 0.0))));
    let reduced = &root * coeffs * &root;
    hermitian_eigenvalues(&reduced).iter().map(|x| x.abs()).sum()
}

/// `(1/|G|) Σ_{π∈G} (P_π|ψ⟩⟨ψ|P_π†)^{⊗k}` as an ensemble over the enumerated
/// group.
pub fn group_twirl_mixture(
    state: &PureState,
    group: &PermGroup,
    k: usize,
    cap: u64,
) -> Result<PureEnsemble> {
    if group.degree() != state.n_qubits() {
        return Err(Error::DegreeMismatch { expected: state.n_qubits(), found: group.degree() });
    }
    check_qubits(state.n_qubits() * k, MAX_QUBITS)?;
    let elements = group.enumerate(cap)?;
    let w = 1.0 / elements.len() as f64;
    let components = elements
        .iter()
        .map(|pi| Ok((w, state.permuted(pi)?.tensor_power(k)?)))
        .collect::<Result<Vec<_>>>()?;
    PureEnsemble::new(components)
}

/// The permutation exchanging the two `n`-qubit halves of a `2n`-qubit register.
pub fn swap_halves(n: usize) -> Permutation {
    Permutation::from_images((0..2 * n).map(|i| (i + n) % (2 * n)).collect())
        .expect("valid permutation")
}

/// `U_π = SWAP · (P_{π⁻¹} ⊗ P_π)` written as a single qubit permutation of the
/// `2n`-qubit register: `U_π(|a⟩|b⟩) = P_π|b⟩ ⊗ P_{π⁻¹}|a⟩`.
pub fn u_pi(pi: &Permutation) -> Permutation {
    let n = pi.degree();
    // P_σ P_τ = P_{τ∘σ}, so SWAP · P_{π⁻¹⊕π} = P_{(π⁻¹⊕π)∘swap}.
    pi.inverse().direct_sum(pi).compose_unchecked(&swap_halves(n))
}

/// Applies `U_π` to a `2n`-qubit state.
pub fn apply_u_pi(pi: &Permutation, state: &PureState) -> Result<PureState> {
    if state.n_qubits() != 2 * pi.degree() {
        return Err(Error::DegreeMismatch { expected: 2 * pi.degree(), found: state.n_qubits() });
    }
    state.permuted(&u_pi(pi))
}

/// Dense matrix of `P_σ`. Debug path for tests; states are permuted by index
/// remapping everywhere else.
pub fn permutation_matrix(sigma: &Permutation) -> DMatrix<C64> {
    let n = sigma.degree();
    let d = 1usize << n;
    let mut m = DMatrix::<C64>::zeros(d, d);
    for x in 0..d {
        m[(permute_index(n, sigma, x), x)] = C64::new(1.0, 0.0);
    }
    m
}

/// Dense `SWAP · (P_{π⁻¹} ⊗ P_π)` assembled from its factors.
pub fn u_pi_matrix(pi: &Permutation) -> DMatrix<C64> {
    let n = pi.degree();
    let d = 1usize << n;
    let mut swap = DMatrix::<C64>::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            swap[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    swap * permutation_matrix(&pi.inverse()).kronecker(&permutation_matrix(pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn apply_dense(m: &DMatrix<C64>, s: &PureState) -> Vec<C64> {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        (m * v).iter().copied().collect()
    }

    #[test]
    fn permutation_unitary_examples() {
        let id = permutation_matrix(&Permutation::identity(3));
        assert_eq!(id, DMatrix::identity(8, 8));
        // σ = (1 2) maps |01⟩ to |10⟩.
        let t = permutation_matrix(&Permutation::transposition(2, 0, 1));
        let out = apply_dense(&t, &PureState::basis(2, 0b01).unwrap());
        assert_eq!(out[0b10], C64::new(1.0, 0.0));
    }

    #[test]
    fn anti_homomorphism_on_basis_states() {
        // P_σ P_τ = P_{τ∘σ}, exhaustively over S3 × S3 and all basis states.
        let elements = PermGroup::symmetric(3).unwrap().enumerate(10).unwrap();
        for sigma in &elements {
            for tau in &elements {
                let lhs = permutation_matrix(sigma) * permutation_matrix(tau);
                let rhs = permutation_matrix(&tau.compose(sigma).unwrap());
                for x in 0..8 {
                    let b = PureState::basis(3, x).unwrap();
                    assert_eq!(apply_dense(&lhs, &b), apply_dense(&rhs, &b));
                }
            }
        }
    }

    #[test]
    fn permutation_unitaries_are_unitary() {
        let mut rng = seeded(1);
        for n in 1..=6 {
            let g = PermGroup::symmetric(n).unwrap();
            let p = permutation_matrix(&g.sample_uniform(&mut rng));
            let dev = (p.adjoint() * &p - DMatrix::<C64>::identity(1 << n, 1 << n)).camax();
            assert!(dev < 1e-9);
        }
    }

    #[test]
    fn u_pi_identity_is_block_swap() {
        let n = 2;
        let u = u_pi_matrix(&Permutation::identity(n));
        let swap = permutation_matrix(&swap_halves(n));
        assert_eq!(u, swap);
        assert_eq!(u_pi(&Permutation::identity(n)), swap_halves(n));
    }

    #[test]
    fn u_pi_fixes_permuted_pair() {
        let mut rng = seeded(6);
        let sigma = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let psi = PureState::random(3, &mut rng).unwrap();
        let input = psi.permuted(&sigma).unwrap().tensor(&psi).unwrap();
        let out = apply_u_pi(&sigma, &input).unwrap();
        assert!((input.inner(&out).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_pi_remap_matches_dense_product() {
        let mut rng = seeded(10);
        let g = PermGroup::symmetric(3).unwrap();
        for _ in 0..5 {
            let pi = g.sample_uniform(&mut rng);
            let a = PureState::random(3, &mut rng).unwrap();
            let b = PureState::random(3, &mut rng).unwrap();
            let input = a.tensor(&b).unwrap();
            let dense = apply_dense(&u_pi_matrix(&pi), &input);
            let remap = apply_u_pi(&pi, &input).unwrap();
            for (x, y) in dense.iter().zip(remap.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
            if !pi.is_identity() {
                assert!(input.inner(&remap).unwrap().norm() < 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn twirl_trivial_group_is_the_state() {
        let mut rng = seeded(3);
        let psi = PureState::random(2, &mut rng).unwrap();
        let mix = group_twirl_mixture(&psi, &PermGroup::trivial(2).unwrap(), 1, 10).unwrap();
        let rho = mix.to_density().unwrap();
        let pure = DensityMatrix::from_pure(&psi).unwrap();
        assert!((rho.matrix() - pure.matrix()).camax() < 1e-12);
    }

    #[test]
    fn ensemble_distance_matches_dense() {
        let mut rng = seeded(21);
        for _ in 0..10 {
            let a = PureState::random(2, &mut rng).unwrap();
            let b = PureState::random(2, &mut rng).unwrap();
            let g = PermGroup::symmetric(2).unwrap();
            let ra = group_twirl_mixture(&a, &g, 2, 10).unwrap();
            let rb = group_twirl_mixture(&b, &g, 2, 10).unwrap();
            let gram = ra.trace_distance(&rb).unwrap();
            let dense = crate::qsim::trace_distance(&ra.to_density().unwrap(), &rb.to_density().unwrap())
                .unwrap();
            assert!((gram - dense).abs() < 1e-9, "{gram} vs {dense}");
        }
    }

    #[test]
    fn isomorphic_twirls_coincide() {
        let a = PureState::basis(2, 0b01).unwrap();
        let b = PureState::basis(2, 0b10).unwrap();
        let g = PermGroup::symmetric(2).unwrap();
        let ra = group_twirl_mixture(&a, &g, 1, 10).unwrap();
        let rb = group_twirl_mixture(&b, &g, 1, 10).unwrap();
        assert!(ra.trace_distance(&rb).unwrap() < 1e-10);
    }
}
