use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::PermGroup;
use crate::qsim::{Circuit, DensityMatrix, PureState};
use crate::stabilizer::StabilizerTableau;

/// `ε(n) = 1/n`, used when an instance omits `epsilon`.
pub fn default_epsilon(n: usize) -> f64 {
    1.0 / n as f64
}

fn check_epsilon(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInstance(format!("epsilon {eps} outside (0, 1]")));
    }
    Ok(eps)
}

fn check_group(group: &PermGroup, n: usize) -> Result<()> {
    if group.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: group.degree() });
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawPair {
    circuit0: Circuit,
    circuit1: Circuit,
    group: PermGroup,
    epsilon: Option<f64>,
}

/// Two pure-state preparations `Q_{ψ0}, Q_{ψ1}` on `n` qubits, a group `G`
/// acting on the qubits, and the gap `ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct SIInstance {
    circuit0: Circuit,
    circuit1: Circuit,
    group: PermGroup,
    epsilon: f64,
}

impl SIInstance {
    pub fn new(circuit0: Circuit, circuit1: Circuit, group: PermGroup, epsilon: Option<f64>) -> Result<Self> {
        for c in [&circuit0, &circuit1] {
            if !c.is_pure() {
                return Err(Error::InvalidInstance("SI circuits must have n_in = n_out".into()));
            }
        }
        let n = circuit0.n_out();
        if circuit1.n_out() != n {
            return Err(Error::DimensionMismatch { left: n, right: circuit1.n_out() });
        }
        check_group(&group, n)?;
        let epsilon = check_epsilon(epsilon.unwrap_or_else(|| default_epsilon(n)))?;
        Ok(Self { circuit0, circuit1, group, epsilon })
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit0.n_out()
    }

    pub fn circuit0(&self) -> &Circuit {
        &self.circuit0
    }

    pub fn circuit1(&self) -> &Circuit {
        &self.circuit1
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(|ψ0⟩, |ψ1⟩)`.
    pub fn states(&self) -> Result<(PureState, PureState)> {
        Ok((self.circuit0.run_pure()?, self.circuit1.run_pure()?))
    }
}

impl TryFrom<RawPair> for SIInstance {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        Self::new(raw.circuit0, raw.circuit1, raw.group, raw.epsilon)
    }
}

/// An SI instance whose circuits are Clifford, so both states are stabilizer
/// states.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct SSIInstance {
    #[serde(flatten)]
    inner: SIInstance,
}

impl SSIInstance {
    pub fn new(circuit0: Circuit, circuit1: Circuit, group: PermGroup, epsilon: Option<f64>) -> Result<Self> {
        for c in [&circuit0, &circuit1] {
            if !c.is_clifford() {
                return Err(Error::NonClifford("SSI circuits must be Clifford".into()));
            }
        }
        Ok(Self { inner: SIInstance::new(circuit0, circuit1, group, epsilon)? })
    }

    pub fn as_si(&self) -> &SIInstance {
        &self.inner
    }

    pub fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    pub fn group(&self) -> &PermGroup {
        &self.inner.group
    }

    pub fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    pub fn circuit0(&self) -> &Circuit {
        &self.inner.circuit0
    }

    pub fn circuit1(&self) -> &Circuit {
        &self.inner.circuit1
    }

    pub fn tableaux(&self) -> Result<(StabilizerTableau, StabilizerTableau)> {
        Ok((
            StabilizerTableau::from_circuit(&self.inner.circuit0)?,
            StabilizerTableau::from_circuit(&self.inner.circuit1)?,
        ))
    }
}

impl TryFrom<RawPair> for SSIInstance {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        Self::new(raw.circuit0, raw.circuit1, raw.group, raw.epsilon)
    }
}

/// How one side of an MSI instance is prepared.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MixedStatePrep {
    /// A circuit in `Q_{2n,n}`: the first `n` qubits are the output.
    Circuit(Circuit),
    /// `ρ_1 ⊗ .. ⊗ ρ_n` built from the single-qubit marginals of `source`.
    ProductOfMarginals { product_of_marginals: Circuit },
}

impl MixedStatePrep {
    pub fn circuit(&self) -> &Circuit {
        match self {
            Self::Circuit(c) | Self::ProductOfMarginals { product_of_marginals: c } => c,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit().n_out()
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            Self::Circuit(c) => c.run_mixed(),
            Self::ProductOfMarginals { product_of_marginals: c } => c.run_mixed()?.product_of_marginals(),
        }
    }
}

#[derive(Deserialize)]
struct RawMixed {
    circuit0: MixedStatePrep,
    circuit1: MixedStatePrep,
    group: PermGroup,
    epsilon: Option<f64>,
}

/// Two mixed-state preparations in `Q_{2n,n}`, a group and the gap `ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawMixed")]
pub struct MSIInstance {
    circuit0: MixedStatePrep,
    circuit1: MixedStatePrep,
    group: PermGroup,
    epsilon: f64,
}

impl MSIInstance {
    pub fn new(
        circuit0: MixedStatePrep,
        circuit1: MixedStatePrep,
        group: PermGroup,
        epsilon: Option<f64>,
    ) -> Result<Self> {
        for prep in [&circuit0, &circuit1] {
            let c = prep.circuit();
            if c.n_in() != 2 * c.n_out() {
                return Err(Error::InvalidInstance(format!(
                    "MSI circuits need n_in = 2 n_out, got {} and {}",
                    c.n_in(),
                    c.n_out()
                )));
            }
        }
        let n = circuit0.n_qubits();
        if circuit1.n_qubits() != n {
            return Err(Error::DimensionMismatch { left: n, right: circuit1.n_qubits() });
        }
        check_group(&group, n)?;
        let epsilon = check_epsilon(epsilon.unwrap_or_else(|| default_epsilon(n)))?;
        Ok(Self { circuit0, circuit1, group, epsilon })
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit0.n_qubits()
    }

    pub fn circuit0(&self) -> &MixedStatePrep {
        &self.circuit0
    }

    pub fn circuit1(&self) -> &MixedStatePrep {
        &self.circuit1
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn densities(&self) -> Result<(DensityMatrix, DensityMatrix)> {
        Ok((self.circuit0.density()?, self.circuit1.density()?))
    }
}

impl TryFrom<RawMixed> for MSIInstance {
    type Error = Error;

    fn try_from(raw: RawMixed) -> Result<Self> {
        Self::new(raw.circuit0, raw.circuit1, raw.group, raw.epsilon)
    }
}

/// Any instance, tagged by `"kind"` in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Instance {
    #[serde(rename = "SI")]
    Si(SIInstance),
    #[serde(rename = "SSI")]
    Ssi(SSIInstance),
    #[serde(rename = "MSI")]
    Msi(MSIInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Si(_) => "SI",
            Self::Ssi(_) => "SSI",
            Self::Msi(_) => "MSI",
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Self::Si(i) => i.n_qubits(),
            Self::Ssi(i) => i.n_qubits(),
            Self::Msi(i) => i.n_qubits(),
        }
    }
}
