use qiso::problems::{
    decide_msi, decide_si, decide_ssi, graph_iso_bruteforce, Instance, MSIInstance, MixedStatePrep, PromiseLabel,
    SIInstance, SSIInstance, MAX_PRODUCT_QUBITS,
};
use qiso::rng::SeededRng;
use qiso::{Circuit, Error, Graph, PermGroup, Result};
use rand::Rng;

use crate::args::{Flavor, GenKind};
use crate::GraphPair;

pub const MAX_RETRIES: usize = 200;

/// Distinct stabilizer states overlap by at most `1/√2`, so this gap leaves
/// no stabilizer pair outside the promise.
const SSI_EPSILON: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub enum Generated {
    Instance(Instance),
    Graphs(GraphPair),
}

pub fn generate(kind: GenKind, n: usize, flavor: Flavor, rng: &mut SeededRng) -> Result<Generated> {
    if n == 0 {
        return Err(Error::InvalidInstance("n must be at least 1".into()));
    }
    if kind == GenKind::Msi && n > MAX_PRODUCT_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_PRODUCT_QUBITS });
    }
    let group = PermGroup::symmetric(n)?;
    for _ in 0..MAX_RETRIES {
        let want_iso = match flavor {
            Flavor::Yes => true,
            Flavor::No => false,
            Flavor::Random => rng.gen(),
        };
        let candidate = match kind {
            GenKind::Si => {
                let (c0, c1) = pure_pair(n, false, want_iso, &group, rng);
                let inst = SIInstance::new(c0, c1, group.clone(), None)?;
                let label = decide_si(&inst)?;
                (label, Generated::Instance(Instance::Si(inst)))
            }
            GenKind::Ssi => {
                let (c0, c1) = pure_pair(n, true, want_iso, &group, rng);
                let inst = SSIInstance::new(c0, c1, group.clone(), Some(SSI_EPSILON))?;
                let label = decide_ssi(&inst)?;
                (label, Generated::Instance(Instance::Ssi(inst)))
            }
            GenKind::Msi => {
                let c0 = mixed_circuit(n, rng)?;
                let c1 = if want_iso { relabelled(&c0, &group, rng)? } else { mixed_circuit(n, rng)? };
                let inst = MSIInstance::new(MixedStatePrep::Circuit(c0), MixedStatePrep::Circuit(c1), group.clone(), None)?;
                let label = decide_msi(&inst)?;
                (label, Generated::Instance(Instance::Msi(inst)))
            }
            GenKind::GraphPair => {
                let g = Graph::random(n, 0.5, rng);
                let h = if want_iso { g.permuted(&group.sample_uniform(rng))? } else { Graph::random(n, 0.5, rng) };
                let label = match graph_iso_bruteforce(&g, &h)? {
                    Some(witness) => PromiseLabel::Yes { witness, value: 1.0 },
                    None => PromiseLabel::No { value: 0.0 },
                };
                (label, Generated::Graphs(GraphPair::new(g, h)))
            }
        };
        let (label, generated) = candidate;
        let matches = match flavor {
            Flavor::Yes => label.is_yes(),
            Flavor::No => label.is_no(),
            Flavor::Random => label.is_yes() || label.is_no(),
        };
        if matches {
            return Ok(generated);
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

fn pure_pair(n: usize, clifford: bool, iso: bool, group: &PermGroup, rng: &mut SeededRng) -> (Circuit, Circuit) {
    let len = if clifford { 2 * n * n + 8 } else { 4 * n + 6 };
    let c0 = Circuit::random(n, len, clifford, rng);
    let c1 = if iso {
        relabelled(&c0, group, rng).expect("same width")
    } else {
        Circuit::random(n, len, clifford, rng)
    };
    (c0, c1)
}

/// `c` followed by a swap network for a random group element on the outputs.
fn relabelled(c: &Circuit, group: &PermGroup, rng: &mut SeededRng) -> Result<Circuit> {
    let sigma = group.sample_uniform(rng);
    let mut out = c.clone();
    for g in Circuit::permutation_network(&sigma).gates() {
        out.push(*g)?;
    }
    Ok(out)
}

/// A circuit in `Q_{2n,n}`: light entanglement with the discarded half, then
/// a random circuit on the outputs.
fn mixed_circuit(n: usize, rng: &mut SeededRng) -> Result<Circuit> {
    let mut gates = Circuit::random(2 * n, 3 * n, false, rng).gates().to_vec();
    gates.extend_from_slice(Circuit::random(n, 6 * n, false, rng).gates());
    Circuit::new(2 * n, n, gates)
}
