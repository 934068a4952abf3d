use serde::Serialize;

use super::{MSIInstance, MixedStatePrep, SSIInstance};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::permgroup::{PermGroup, Permutation};
use crate::qsim::{trace_norm_distance, Circuit, DensityMatrix, MAX_QUBITS};
use crate::stabilizer::graph_state_circuit;

/// Largest output width accepted by [`reduce_productstate_to_msi`].
pub const MAX_PRODUCT_QUBITS: usize = 4;

const MAX_BRUTEFORCE_VERTICES: usize = 8;

/// `(|G⟩, |H⟩)` under `𝔖_n` with `ε = 2^{-1/2}`. Isomorphic graphs give a YES
/// instance; otherwise every overlap satisfies `|⟨σ(G)|H⟩|² ≤ 1/2`.
pub fn reduce_gi_to_ssi(g: &Graph, h: &Graph) -> Result<SSIInstance> {
    if g.n_vertices() != h.n_vertices() {
        return Err(Error::DimensionMismatch { left: g.n_vertices(), right: h.n_vertices() });
    }
    SSIInstance::new(
        graph_state_circuit(g),
        graph_state_circuit(h),
        PermGroup::symmetric(g.n_vertices())?,
        Some(std::f64::consts::FRAC_1_SQRT_2),
    )
}

/// The lexicographically first `σ` with `σ(g) = h`, by exhaustive search.
pub fn graph_iso_bruteforce(g: &Graph, h: &Graph) -> Result<Option<Permutation>> {
    let n = g.n_vertices();
    if n > MAX_BRUTEFORCE_VERTICES {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_BRUTEFORCE_VERTICES });
    }
    if h.n_vertices() != n || g.degree_sequence() != h.degree_sequence() {
        return Ok(None);
    }
    for sigma in PermGroup::symmetric(n)?.enumerate(u64::MAX)? {
        if g.permuted(&sigma)? == *h {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}

/// Maps a circuit `Q_ρ ∈ Q_{2n,n}` to the MSI instance `(ρ, ρ_1 ⊗ .. ⊗ ρ_n)`
/// over `𝔖_n`. The second state is assembled from the computed marginals.
pub fn reduce_productstate_to_msi(q: &Circuit) -> Result<MSIInstance> {
    let n = q.n_out();
    if n > MAX_PRODUCT_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_PRODUCT_QUBITS });
    }
    MSIInstance::new(
        MixedStatePrep::Circuit(q.clone()),
        MixedStatePrep::ProductOfMarginals { product_of_marginals: q.clone() },
        PermGroup::symmetric(n)?,
        None,
    )
}

/// Literal wiring of `n` copies of `q`: output line `i` is line `i` of copy
/// `i`, every other line is discarded. Outputs occupy the first `n` qubits.
pub fn marginal_product_circuit(q: &Circuit) -> Result<Circuit> {
    let n = q.n_out();
    let width = n * q.n_in();
    if width > MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: width, limit: MAX_QUBITS });
    }
    let mut gates = Vec::new();
    let mut next_free = n;
    for copy in 0..n {
        let map: Vec<usize> = (0..q.n_in())
            .map(|line| {
                if line == copy {
                    copy
                } else {
                    next_free += 1;
                    next_free - 1
                }
            })
            .collect();
        gates.extend(q.gates().iter().map(|g| g.remap(|l| map[l])));
    }
    Circuit::new(width, n, gates)
}

/// Numbers behind the inequality
/// `‖ρ − ρ_1⊗..⊗ρ_n‖₁ ≤ (n+1) ‖ρ − σ_1⊗..⊗σ_n‖₁`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GutoskiReport {
    pub n: usize,
    /// `α = ‖ρ − σ_1⊗..⊗σ_n‖₁` for the supplied witness.
    pub witness_distance: f64,
    /// `‖ρ − ρ_1⊗..⊗ρ_n‖₁`.
    pub marginal_distance: f64,
    /// `(n+1) α`.
    pub bound: f64,
    pub holds: bool,
}

/// Evaluates both sides of the marginal-product inequality for `ρ` and a
/// product witness given by its single-qubit factors.
pub fn check_gutoski_bound(rho: &DensityMatrix, witness: &[DensityMatrix]) -> Result<GutoskiReport> {
    let n = rho.n_qubits();
    if witness.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: witness.len() });
    }
    if let Some(f) = witness.iter().find(|f| f.n_qubits() != 1) {
        return Err(Error::DimensionMismatch { left: 1, right: f.n_qubits() });
    }
    let sigma = DensityMatrix::tensor_all(witness)?;
    let witness_distance = trace_norm_distance(rho, &sigma)?;
    let marginal_distance = trace_norm_distance(rho, &rho.product_of_marginals()?)?;
    let bound = (n as f64 + 1.0) * witness_distance;
    Ok(GutoskiReport { n, witness_distance, marginal_distance, bound, holds: marginal_distance <= bound + 1e-9 })
}
