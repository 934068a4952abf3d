use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_qubits, DensityMatrix, PureState, MAX_DENSITY_QUBITS, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::permgroup::Permutation;

/// Gates over 0-based qubit indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    T(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz { control: usize, target: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::T(_) => "T",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz { .. } => "CZ",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Z(q) => vec![q],
            Gate::Cnot { control, target } | Gate::Cz { control, target } => vec![control, target],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    /// The same gate with every qubit index passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::T(q) => Gate::T(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::Cnot { control, target } => Gate::Cnot { control: f(control), target: f(target) },
            Gate::Cz { control, target } => Gate::Cz { control: f(control), target: f(target) },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cnot { control, target } | Gate::Cz { control, target } => {
                write!(f, "{} {} {}", self.name(), control + 1, target + 1)
            }
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Z(q) => {
                write!(f, "{} {}", self.name(), q + 1)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawGate {
    g: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    c: Option<usize>,
    t: usize,
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match *self {
            Gate::Cnot { control, target } | Gate::Cz { control, target } => {
                RawGate { g: self.name().into(), c: Some(control + 1), t: target + 1 }
            }
            Gate::H(q) | Gate::S(q) | Gate::T(q) | Gate::X(q) | Gate::Z(q) => {
                RawGate { g: self.name().into(), c: None, t: q + 1 }
            }
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawGate::deserialize(deserializer)?;
        let idx = |i: usize| i.checked_sub(1).ok_or_else(|| D::Error::custom("qubit indices are 1-based"));
        let t = idx(raw.t)?;
        let two = |make: fn(usize, usize) -> Gate| -> std::result::Result<Gate, D::Error> {
            let c = raw.c.ok_or_else(|| D::Error::custom(format!("{} needs a control", raw.g)))?;
            Ok(make(idx(c)?, t))
        };
        match raw.g.to_ascii_uppercase().as_str() {
            "H" => Ok(Gate::H(t)),
            "S" => Ok(Gate::S(t)),
            "T" => Ok(Gate::T(t)),
            "X" => Ok(Gate::X(t)),
            "Z" => Ok(Gate::Z(t)),
            "CNOT" | "CX" => two(|control, target| Gate::Cnot { control, target }),
            "CZ" => two(|control, target| Gate::Cz { control, target }),
            other => Err(D::Error::custom(format!("unknown gate {other}"))),
        }
    }
}

/// A circuit with `n_in` qubits started in `|0⟩`; the last `n_in - n_out`
/// qubits are discarded at the end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    n_in: usize,
    n_out: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_in: usize, n_out: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_out == 0 || n_out > n_in {
            return Err(Error::InvalidInstance(format!(
                "circuit needs 1 <= n_out <= n_in, got n_in={n_in}, n_out={n_out}"
            )));
        }
        for g in &gates {
            validate_gate(g, n_in)?;
        }
        Ok(Self { n_in, n_out, gates })
    }

    /// A circuit with no discarded qubits.
    pub fn pure(n: usize, gates: Vec<Gate>) -> Result<Self> {
        Self::new(n, n, gates)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, n, Vec::new())
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_pure(&self) -> bool {
        self.n_in == self.n_out
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        validate_gate(&gate, self.n_in)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends the gates of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n_in != self.n_in {
            return Err(Error::DimensionMismatch { left: self.n_in, right: other.n_in });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// State of all `n_in` qubits after the gates act on `|0..0⟩`.
    pub fn run_full(&self) -> Result<PureState> {
        let mut state = PureState::zero(self.n_in)?;
        for g in &self.gates {
            state.apply_gate(g)?;
        }
        Ok(state)
    }

    /// Output state of a circuit without discarded qubits.
    pub fn run_pure(&self) -> Result<PureState> {
        if !self.is_pure() {
            return Err(Error::InvalidInstance(format!(
                "run_pure needs n_in = n_out, got {} and {}",
                self.n_in, self.n_out
            )));
        }
        check_qubits(self.n_in, MAX_QUBITS)?;
        self.run_full()
    }

    /// Reduced state of the first `n_out` qubits.
    pub fn run_mixed(&self) -> Result<DensityMatrix> {
        check_qubits(self.n_in, MAX_QUBITS)?;
        check_qubits(self.n_out, MAX_DENSITY_QUBITS)?;
        let full = self.run_full()?;
        if self.is_pure() {
            return DensityMatrix::from_pure(&full);
        }
        let keep: Vec<usize> = (0..self.n_out).collect();
        DensityMatrix::reduced_from_pure(&full, &keep)
    }

    /// Swap network over CNOT triples implementing `P_σ` on `n` qubits.
    pub fn permutation_network(sigma: &Permutation) -> Circuit {
        let n = sigma.degree();
        // cur[i] is the input qubit currently held at position i.
        let mut cur: Vec<usize> = (0..n).collect();
        let mut gates = Vec::new();
        for i in 0..n {
            let want = sigma.apply(i);
            let j = (i..n).find(|&j| cur[j] == want).expect("bijection");
            if j != i {
                gates.extend(swap_gates(i, j));
                cur.swap(i, j);
            }
        }
        Circuit { n_in: n, n_out: n, gates }
    }

    /// Random circuit of `len` gates. Clifford-only circuits draw from
    /// {H, S, CNOT}; otherwise T is mixed in.
    pub fn random<R: Rng + ?Sized>(n: usize, len: usize, clifford_only: bool, rng: &mut R) -> Circuit {
        let kinds = if clifford_only { 3 } else { 4 };
        let mut gates = Vec::with_capacity(len);
        for _ in 0..len {
            let kind = if n < 2 { rng.gen_range(0..kinds - 1) } else { rng.gen_range(0..kinds) };
            let q = rng.gen_range(0..n);
            let gate = match (kind, clifford_only) {
                (0, _) => Gate::H(q),
                (1, _) => Gate::S(q),
                (2, false) => Gate::T(q),
                _ => {
                    let mut t = rng.gen_range(0..n - 1);
                    if t >= q {
                        t += 1;
                    }
                    Gate::Cnot { control: q, target: t }
                }
            };
            gates.push(gate);
        }
        Circuit { n_in: n, n_out: n, gates }
    }
}

/// SWAP as three CNOTs.
fn swap_gates(a: usize, b: usize) -> [Gate; 3] {
    [
        Gate::Cnot { control: a, target: b },
        Gate::Cnot { control: b, target: a },
        Gate::Cnot { control: a, target: b },
    ]
}

fn validate_gate(g: &Gate, n: usize) -> Result<()> {
    for q in g.qubits() {
        if q >= n {
            return Err(Error::BadIndex { index: q + 1, len: n });
        }
    }
    if let Gate::Cnot { control, target } | Gate::Cz { control, target } = *g {
        if control == target {
            return Err(Error::InvalidInstance(format!("{g}: control equals target")));
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawCircuit {
    n_in: usize,
    n_out: usize,
    gates: Vec<Gate>,
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCircuit::deserialize(deserializer)?;
        Circuit::new(raw.n_in, raw.n_out, raw.gates).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::C64;
    use crate::rng::seeded;

    const R2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_amps(state: &PureState, expected: &[C64]) {
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn run_pure_examples() {
        let empty = Circuit::empty(1).unwrap();
        assert_eq!(empty.run_pure().unwrap(), PureState::zero(1).unwrap());

        let h = Circuit::pure(1, vec![Gate::H(0)]).unwrap();
        assert_amps(&h.run_pure().unwrap(), &[C64::new(R2, 0.0), C64::new(R2, 0.0)]);

        // (CNOT)(H ⊗ I)|00⟩ by hand: H gives (|00⟩+|10⟩)/√2, CNOT maps |10⟩ to |11⟩.
        let bell = Circuit::pure(2, vec![Gate::H(0), Gate::Cnot { control: 0, target: 1 }]).unwrap();
        let z = C64::new(0.0, 0.0);
        assert_amps(&bell.run_pure().unwrap(), &[C64::new(R2, 0.0), z, z, C64::new(R2, 0.0)]);
    }

    #[test]
    fn gates_preserve_norm() {
        let mut rng = seeded(9);
        for n in 1..=6 {
            let c = Circuit::random(n, 60, false, &mut rng);
            let mut s = PureState::zero(n).unwrap();
            for g in c.gates() {
                s.apply_gate(g).unwrap();
                assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn permutation_network_matches_index_remap() {
        let mut rng = seeded(4);
        for n in 1..=5 {
            let group = crate::permgroup::PermGroup::symmetric(n).unwrap();
            for _ in 0..10 {
                let sigma = group.sample_uniform(&mut rng);
                let base = Circuit::random(n, 30, false, &mut rng);
                let psi = base.run_pure().unwrap();
                let mut c = base.clone();
                c.extend(&Circuit::permutation_network(&sigma)).unwrap();
                let out = c.run_pure().unwrap();
                let expected = psi.permuted(&sigma).unwrap();
                assert!((out.fidelity(&expected).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn json_format() {
        let json = r#"{"n_in":2,"n_out":1,"gates":[{"g":"H","t":1},{"g":"CNOT","c":1,"t":2}]}"#;
        let c: Circuit = serde_json::from_str(json).unwrap();
        assert_eq!(c.gates(), &[Gate::H(0), Gate::Cnot { control: 0, target: 1 }]);
        assert_eq!(serde_json::to_string(&c).unwrap(), json);
        assert!(serde_json::from_str::<Circuit>(r#"{"n_in":1,"n_out":1,"gates":[{"g":"H","t":2}]}"#).is_err());
        assert!(serde_json::from_str::<Circuit>(r#"{"n_in":2,"n_out":2,"gates":[{"g":"CZ","t":2}]}"#).is_err());
        assert!(serde_json::from_str::<Circuit>(r#"{"n_in":1,"n_out":2,"gates":[]}"#).is_err());
    }

    #[test]
    fn too_many_qubits() {
        let c = Circuit::empty(13).unwrap();
        assert!(matches!(c.run_pure(), Err(Error::TooManyQubits { .. })));
    }
}
