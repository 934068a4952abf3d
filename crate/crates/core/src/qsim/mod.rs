//! Dense state-vector and density-matrix simulation on a handful of qubits.
//!
//! Qubit 0 is the most significant bit of a basis index. `P_σ` sends
//! `|x_1 .. x_n⟩` to `|x_{σ(1)} .. x_{σ(n)}⟩` and is applied by permuting
//! amplitude indices; with this convention `P_σ P_τ = P_{τ∘σ}`.

mod circuit;
mod density;
mod state;
mod twirl;

pub use num_complex::Complex64 as C64;

pub use circuit::{Circuit, Gate};
pub use density::{partial_trace, trace_distance, trace_norm_distance, DensityMatrix, DENSITY_TOL};
pub(crate) use state::{check_qubits, qubit_bit};
pub use state::{
    inner_product, swap_test_circuit_prob, swap_test_prob, swap_test_sample, PureState, NORM_TOL,
};
pub use twirl::{
    apply_u_pi, group_twirl_mixture, permutation_matrix, signed_sum_trace_norm, swap_halves, u_pi,
    u_pi_matrix, PureEnsemble,
};

/// Largest register simulated as a state vector.
pub const MAX_QUBITS: usize = 12;

/// Largest register held as a dense density matrix.
pub const MAX_DENSITY_QUBITS: usize = 6;

/// `P_σ|ψ⟩`.
pub fn permutation_unitary_apply(sigma: &crate::Permutation, psi: &PureState) -> crate::Result<PureState> {
    psi.permuted(sigma)
}
