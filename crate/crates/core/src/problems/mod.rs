//! SI, SSI and MSI promise problems: instances, brute-force oracles over the
//! enumerated group, certificate verification and the reductions from graph
//! isomorphism and product-state testing.

mod instance;
mod oracle;
mod reduce;

pub use instance::{default_epsilon, Instance, MSIInstance, MixedStatePrep, SIInstance, SSIInstance};
pub use oracle::{
    decide_msi, decide_msi_capped, decide_si, decide_si_capped, decide_ssi, decide_ssi_capped,
    max_swap_acceptance, verify_certificate, PromiseLabel, YES_THRESHOLD,
};
pub use reduce::{
    check_gutoski_bound, graph_iso_bruteforce, marginal_product_circuit, reduce_gi_to_ssi,
    reduce_productstate_to_msi, GutoskiReport, MAX_PRODUCT_QUBITS,
};
