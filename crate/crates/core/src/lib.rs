//! Quantum state isomorphism at desk scale.
//!
//! The crate bundles everything needed to pose and decide isomorphism questions
//! about small quantum states under qubit permutations:
//!
//! - [`permgroup`]: permutations, Schreier–Sims base and strong generating sets,
//!   membership, uniform sampling and string isomorphism.
//! - [`qsim`]: dense pure and mixed state simulation, subsystem permutation
//!   unitaries, the SWAP test and trace distance.
//! - [`stabilizer`]: a stabilizer tableau engine with canonical forms, classical
//!   descriptions, exact overlaps and graph states.
//! - [`problems`]: SI / SSI / MSI instances, brute-force promise oracles,
//!   certificate verification and reductions.
//! - [`protocols`]: simulations of the two-message non-isomorphism proof system,
//!   its zero-knowledge view, the classical stabilizer variant and the
//!   Goldwasser–Sipser set lower bound protocol.
//!
//! Qubits and permutation points are 0-based throughout the Rust API. JSON
//! formats use 1-based indices; conversion happens in the serde impls.

pub mod error;
pub mod graph;
pub mod permgroup;
pub mod problems;
pub mod protocols;
pub mod qsim;
pub mod rng;
pub mod stabilizer;

pub use error::{Error, Result};
pub use graph::Graph;
pub use permgroup::{IndexedString, PermGroup, Permutation};
pub use qsim::{Circuit, DensityMatrix, Gate, PureState};
pub use stabilizer::{PauliString, StabilizerDescription, StabilizerTableau};

/// Default enumeration cap used by every brute-force oracle.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Environment variable that overrides [`DEFAULT_ENUMERATION_CAP`].
pub const CAP_ENV_VAR: &str = "QISO_CAP";

/// Returns the enumeration cap, honouring `QISO_CAP` when it parses.
pub fn enumeration_cap() -> u64 {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}
