//! Stabilizer states via the Gottesman–Knill tableau: Clifford evolution,
//! Z measurements, canonical generator sets and their classical descriptions,
//! exact overlaps, graph states and qubit permutations.

mod pauli;
mod tableau;


pub use pauli::PauliString;
pub use tableau::{
    graph_state, graph_state_circuit, overlap, overlap_exact, random_stabilizer,
    StabilizerDescription, StabilizerOverlap, StabilizerTableau,
};
#[cfg(test)]
pub(crate) use tableau::apply_pauli;
