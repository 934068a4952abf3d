use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MSIInstance, SIInstance, SSIInstance};
use crate::error::{Error, Result};
use crate::permgroup::Permutation;
use crate::qsim::{swap_test_prob, swap_test_sample, trace_distance, MAX_DENSITY_QUBITS};
use crate::stabilizer::{overlap_exact, StabilizerOverlap};
use crate::enumeration_cap;

/// Overlaps at or above this count as exactly 1 in dense arithmetic.
pub const YES_THRESHOLD: f64 = 1.0 - 1e-9;

const GAP_SLACK: f64 = 1e-9;

/// Oracle verdict. `value` is the extremal quantity over the group: the
/// largest overlap for SI/SSI, the smallest trace distance for MSI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PromiseLabel {
    Yes { witness: Permutation, value: f64 },
    No { value: f64 },
    PromiseViolated { value: f64 },
}

impl PromiseLabel {
    pub fn value(&self) -> f64 {
        match *self {
            Self::Yes { value, .. } | Self::No { value } | Self::PromiseViolated { value } => value,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Self::No { .. })
    }

    pub fn witness(&self) -> Option<&Permutation> {
        match self {
            Self::Yes { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// 0 for YES, 1 for NO, 2 for a promise violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Yes { .. } => 0,
            Self::No { .. } => 1,
            Self::PromiseViolated { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Yes { .. } => "YES",
            Self::No { .. } => "NO",
            Self::PromiseViolated { .. } => "PROMISE_VIOLATED",
        }
    }
}

pub fn decide_si(inst: &SIInstance) -> Result<PromiseLabel> {
    decide_si_capped(inst, enumeration_cap())
}

/// Maximizes `|⟨ψ1|P_σ|ψ0⟩|` over the enumerated group.
pub fn decide_si_capped(inst: &SIInstance, cap: u64) -> Result<PromiseLabel> {
    let elements = inst.group().enumerate(cap)?;
    let (psi0, psi1) = inst.states()?;
    let overlaps = elements
        .par_iter()
        .map(|sigma| Ok(psi1.inner(&psi0.permuted(sigma)?)?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let max = overlaps.iter().copied().fold(0.0, f64::max);
    if let Some(i) = overlaps.iter().position(|&v| v >= YES_THRESHOLD) {
        return Ok(PromiseLabel::Yes { witness: elements[i].clone(), value: max });
    }
    if max <= inst.epsilon() + GAP_SLACK {
        return Ok(PromiseLabel::No { value: max });
    }
    Ok(PromiseLabel::PromiseViolated { value: max })
}

pub fn decide_ssi(inst: &SSIInstance) -> Result<PromiseLabel> {
    decide_ssi_capped(inst, enumeration_cap())
}

/// As [`decide_si_capped`] with exact dyadic stabilizer overlaps.
pub fn decide_ssi_capped(inst: &SSIInstance, cap: u64) -> Result<PromiseLabel> {
    let elements = inst.group().enumerate(cap)?;
    let (t0, t1) = inst.tableaux()?;
    let overlaps = elements
        .par_iter()
        .map(|sigma| overlap_exact(&t0.permute_qubits(sigma)?, &t1))
        .collect::<Result<Vec<_>>>()?;
    let best = overlaps
        .iter()
        .copied()
        .max_by(|a, b| a.squared().total_cmp(&b.squared()))
        .expect("groups are nonempty");
    if let Some(i) = overlaps.iter().position(|o| *o == StabilizerOverlap::Dyadic { s: 0 }) {
        return Ok(PromiseLabel::Yes { witness: elements[i].clone(), value: 1.0 });
    }
    let eps = inst.epsilon();
    if best.squared() <= eps * eps + 1e-12 {
        return Ok(PromiseLabel::No { value: best.value() });
    }
    Ok(PromiseLabel::PromiseViolated { value: best.value() })
}

pub fn decide_msi(inst: &MSIInstance) -> Result<PromiseLabel> {
    decide_msi_capped(inst, enumeration_cap())
}

/// Minimizes `D(P_σ ρ0 P_σ†, ρ1)` over the enumerated group.
pub fn decide_msi_capped(inst: &MSIInstance, cap: u64) -> Result<PromiseLabel> {
    let n = inst.n_qubits();
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::TooManyQubits { requested: n, limit: MAX_DENSITY_QUBITS });
    }
    let elements = inst.group().enumerate(cap)?;
    let (rho0, rho1) = inst.densities()?;
    let distances = elements
        .par_iter()
        .map(|sigma| trace_distance(&rho0.permuted(sigma)?, &rho1))
        .collect::<Result<Vec<f64>>>()?;
    let (i, &min) = distances
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("groups are nonempty");
    let eps = inst.epsilon();
    if min <= eps + GAP_SLACK {
        return Ok(PromiseLabel::Yes { witness: elements[i].clone(), value: min });
    }
    if min >= 1.0 - eps - GAP_SLACK {
        return Ok(PromiseLabel::No { value: min });
    }
    Ok(PromiseLabel::PromiseViolated { value: min })
}

/// Runs the SWAP-test verifier on `(P_σ|ψ0⟩, |ψ1⟩)` for `trials` rounds and
/// returns the acceptance frequency. Certificates outside the group are
/// rejected outright.
pub fn verify_certificate<R: Rng + ?Sized>(
    inst: &SIInstance,
    sigma: &Permutation,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if !inst.group().contains(sigma)? || trials == 0 {
        return Ok(0.0);
    }
    let (psi0, psi1) = inst.states()?;
    let moved = psi0.permuted(sigma)?;
    let mut accepts = 0usize;
    for _ in 0..trials {
        accepts += swap_test_sample(&moved, &psi1, rng)? as usize;
    }
    Ok(accepts as f64 / trials as f64)
}

/// `max_{σ∈G} Pr[SWAP test accepts (P_σ|ψ0⟩, |ψ1⟩)]`, computed analytically.
pub fn max_swap_acceptance(inst: &SIInstance, cap: u64) -> Result<f64> {
    let (psi0, psi1) = inst.states()?;
    inst.group()
        .enumerate(cap)?
        .iter()
        .map(|sigma| swap_test_prob(&psi0.permuted(sigma)?, &psi1))
        .try_fold(0.0f64, |m, p| Ok(m.max(p?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::PermGroup;
    use crate::problems::{MixedStatePrep, SSIInstance};
    use crate::qsim::{Circuit, Gate};
    use crate::rng::seeded;
    use crate::stabilizer::graph_state_circuit;
    use crate::graph::Graph;

    fn c(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::pure(n, gates).unwrap()
    }

    fn ket01() -> Circuit {
        c(2, vec![Gate::X(1)])
    }

    fn ket10() -> Circuit {
        c(2, vec![Gate::X(0)])
    }

    #[test]
    fn si_examples() {
        let mut rng = seeded(1);
        let circ = Circuit::random(3, 12, false, &mut rng);
        let same = SIInstance::new(circ.clone(), circ, PermGroup::cyclic(3).unwrap(), None).unwrap();
        let label = decide_si(&same).unwrap();
        assert!(label.witness().unwrap().is_identity());

        let trivial = SIInstance::new(ket01(), ket10(), PermGroup::trivial(2).unwrap(), Some(0.5)).unwrap();
        assert_eq!(decide_si(&trivial).unwrap(), PromiseLabel::No { value: 0.0 });

        let full = SIInstance::new(ket01(), ket10(), PermGroup::symmetric(2).unwrap(), None).unwrap();
        let label = decide_si(&full).unwrap();
        assert_eq!(label.witness().unwrap(), &Permutation::transposition(2, 0, 1));
        assert_eq!(label.exit_code(), 0);
    }

    #[test]
    fn si_promise_violation_is_reported() {
        // |0⟩ vs |+⟩ overlap 1/√2 > ε = 1/2.
        let inst = SIInstance::new(c(1, vec![]), c(1, vec![Gate::H(0)]), PermGroup::trivial(1).unwrap(), Some(0.5))
            .unwrap();
        let label = decide_si(&inst).unwrap();
        assert!(matches!(label, PromiseLabel::PromiseViolated { .. }));
        assert!((label.value() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(label.exit_code(), 2);
    }

    #[test]
    fn ssi_examples() {
        let bell = c(2, vec![Gate::H(0), Gate::Cnot { control: 0, target: 1 }]);
        let s2 = PermGroup::symmetric(2).unwrap();
        let inst = SSIInstance::new(bell.clone(), bell, s2.clone(), None).unwrap();
        assert!(decide_ssi(&inst).unwrap().is_yes());

        let plus = c(2, vec![Gate::H(0), Gate::H(1)]);
        let inst = SSIInstance::new(c(2, vec![]), plus, s2, Some(0.5)).unwrap();
        assert_eq!(decide_ssi(&inst).unwrap(), PromiseLabel::No { value: 0.5 });

        let c4 = graph_state_circuit(&Graph::cycle(4));
        let p4 = graph_state_circuit(&Graph::path(4));
        let inst = SSIInstance::new(c4, p4, PermGroup::symmetric(4).unwrap(), Some(0.5f64.sqrt())).unwrap();
        assert!(decide_ssi(&inst).unwrap().is_no());
    }

    #[test]
    fn ssi_agrees_with_dense_si() {
        let mut rng = seeded(19);
        for i in 0..60 {
            let n = 1 + i % 4;
            let c0 = Circuit::random(n, 2 * n * n + 4, true, &mut rng);
            let c1 = if i % 3 == 0 {
                let mut moved = c0.clone();
                let sigma = PermGroup::symmetric(n).unwrap().sample_uniform(&mut rng);
                moved.extend(&Circuit::permutation_network(&sigma)).unwrap();
                moved
            } else {
                Circuit::random(n, 2 * n * n + 4, true, &mut rng)
            };
            let group = if i % 2 == 0 { PermGroup::symmetric(n) } else { PermGroup::cyclic(n) }.unwrap();
            let ssi = SSIInstance::new(c0, c1, group, Some(0.5f64.sqrt())).unwrap();
            let exact = decide_ssi(&ssi).unwrap();
            let dense = decide_si(ssi.as_si()).unwrap();
            assert_eq!(exact.name(), dense.name());
            assert!((exact.value() - dense.value()).abs() < 1e-9);
            if let Some(w) = exact.witness() {
                assert_eq!(Some(w), dense.witness());
            }
        }
    }

    fn msi(gates: Vec<Gate>) -> MixedStatePrep {
        MixedStatePrep::Circuit(Circuit::new(4, 2, gates).unwrap())
    }

    #[test]
    fn msi_examples() {
        let zero = msi(vec![]);
        let mixed = msi(vec![Gate::H(2), Gate::Cnot { control: 2, target: 0 }, Gate::H(3), Gate::Cnot { control: 3, target: 1 }]);
        let inst = MSIInstance::new(zero.clone(), zero.clone(), PermGroup::symmetric(2).unwrap(), None).unwrap();
        let label = decide_msi(&inst).unwrap();
        assert!(label.is_yes() && label.value().abs() < 1e-12);

        let inst = MSIInstance::new(zero, mixed, PermGroup::trivial(2).unwrap(), Some(0.1)).unwrap();
        let label = decide_msi(&inst).unwrap();
        assert!(matches!(label, PromiseLabel::PromiseViolated { .. }));
        assert!((label.value() - 0.75).abs() < 1e-9);

        // |0⟩⟨0| ⊗ I/2 against I/2 ⊗ |0⟩⟨0|.
        let a = msi(vec![Gate::H(3), Gate::Cnot { control: 3, target: 1 }]);
        let b = msi(vec![Gate::H(3), Gate::Cnot { control: 3, target: 0 }]);
        let inst = MSIInstance::new(a, b, PermGroup::symmetric(2).unwrap(), None).unwrap();
        let label = decide_msi(&inst).unwrap();
        assert_eq!(label.witness().unwrap(), &Permutation::transposition(2, 0, 1));
        assert!(label.value() < 1e-12);
    }

    #[test]
    fn certificate_examples() {
        let mut rng = seeded(4);
        let yes = SIInstance::new(ket01(), ket10(), PermGroup::symmetric(2).unwrap(), None).unwrap();
        let sigma = decide_si(&yes).unwrap().witness().unwrap().clone();
        assert_eq!(verify_certificate(&yes, &sigma, 10_000, &mut rng).unwrap(), 1.0);

        let cyc = SIInstance::new(ket01(), ket10(), PermGroup::trivial(2).unwrap(), Some(0.5)).unwrap();
        assert_eq!(verify_certificate(&cyc, &sigma, 100, &mut rng).unwrap(), 0.0);

        // NO instance: overlap 0, acceptance 1/2 within 5σ.
        let id = Permutation::identity(2);
        let trials = 10_000;
        let f = verify_certificate(&cyc, &id, trials, &mut rng).unwrap();
        let sd = (0.25 / trials as f64).sqrt();
        assert!((f - 0.5).abs() < 5.0 * sd);
        assert!(f <= 0.5 + cyc.epsilon() + 5.0 * sd);
    }

    #[test]
    fn no_instances_respect_swap_bound() {
        let mut rng = seeded(23);
        let mut seen = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let c0 = Circuit::random(n, 6 * n, false, &mut rng);
            let c1 = Circuit::random(n, 6 * n, false, &mut rng);
            let inst = SIInstance::new(c0, c1, PermGroup::symmetric(n).unwrap(), Some(0.9)).unwrap();
            if decide_si(&inst).unwrap().is_no() {
                seen += 1;
                let eps = inst.epsilon();
                assert!(max_swap_acceptance(&inst, 100).unwrap() <= 0.5 + eps * eps / 2.0 + 1e-9);
            }
        }
        assert!(seen > 10);
    }
}
