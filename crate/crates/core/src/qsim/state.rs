use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Gate, C64, MAX_QUBITS};
use crate::error::{Error, Result};
use crate::permgroup::Permutation;

/// Tolerance for unit-norm checks on state vectors.
pub const NORM_TOL: f64 = 1e-9;

/// A pure state on `n` qubits. Qubit 0 is the most significant bit of the
/// basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

pub(crate) fn check_qubits(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooManyQubits { requested: n, limit });
    }
    Ok(())
}

/// Bit of basis index `index` holding qubit `q` in an `n`-qubit register.
#[inline]
pub(crate) fn qubit_bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

impl PureState {
    /// `|0..0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::BadIndex { index, len: dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let dim = 1usize << n;
        let a = 1.0 / (dim as f64).sqrt();
        Ok(Self { n, amps: vec![C64::new(a, 0.0); dim] })
    }

    /// Wraps amplitudes that already have unit norm.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = dimension_to_qubits(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Parse(format!("state has squared norm {norm}, expected 1")));
        }
        Ok(Self { n, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let n = dimension_to_qubits(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Parse("cannot normalize the zero vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n, MAX_QUBITS)?;
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `|self⟩ ⊗ |other⟩`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_qubits(self.n + other.n, MAX_QUBITS)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(PureState { n: self.n + other.n, amps })
    }

    pub fn tensor_power(&self, k: usize) -> Result<PureState> {
        if k == 0 {
            return Err(Error::Parse("tensor power needs k >= 1".into()));
        }
        check_qubits(self.n * k, MAX_QUBITS)?;
        let mut out = self.clone();
        for _ in 1..k {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// `P_σ|ψ⟩`, where `P_σ|x_1..x_n⟩ = |x_{σ(1)}..x_{σ(n)}⟩`. Implemented by
    /// remapping amplitude indices.
    pub fn permuted(&self, sigma: &Permutation) -> Result<PureState> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: sigma.degree() });
        }
        let n = self.n;
        let mut amps = vec![C64::new(0.0, 0.0); self.dim()];
        for (x, a) in self.amps.iter().enumerate() {
            amps[permute_index(n, sigma, x)] = *a;
        }
        Ok(PureState { n, amps })
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::BadIndex { index: q, len: self.n });
            }
        }
        let n = self.n;
        let frac = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(q) => {
                let bit = qubit_bit(n, q);
                for x in 0..self.dim() {
                    if x & bit == 0 {
                        let (a, b) = (self.amps[x], self.amps[x | bit]);
                        self.amps[x] = (a + b) * frac;
                        self.amps[x | bit] = (a - b) * frac;
                    }
                }
            }
            Gate::X(q) => {
                let bit = qubit_bit(n, q);
                for x in 0..self.dim() {
                    if x & bit == 0 {
                        self.amps.swap(x, x | bit);
                    }
                }
            }
            Gate::Z(q) => self.phase_on(qubit_bit(n, q), C64::new(-1.0, 0.0)),
            Gate::S(q) => self.phase_on(qubit_bit(n, q), C64::new(0.0, 1.0)),
            Gate::T(q) => self.phase_on(qubit_bit(n, q), C64::new(frac, frac)),
            Gate::Cnot { control, target } => {
                let (cb, tb) = (qubit_bit(n, control), qubit_bit(n, target));
                for x in 0..self.dim() {
                    if x & cb != 0 && x & tb == 0 {
                        self.amps.swap(x, x | tb);
                    }
                }
            }
            Gate::Cz { control, target } => {
                self.phase_on(qubit_bit(n, control) | qubit_bit(n, target), C64::new(-1.0, 0.0))
            }
        }
        Ok(())
    }

    fn phase_on(&mut self, mask: usize, phase: C64) {
        for (x, a) in self.amps.iter_mut().enumerate() {
            if x & mask == mask {
                *a *= phase;
            }
        }
    }

    /// Multiplies by a global phase so the first non-negligible amplitude is
    /// real and positive.
    pub fn canonical_phase(&self) -> PureState {
        let lead = self.amps.iter().find(|a| a.norm() > 1e-12).copied();
        match lead {
            Some(a) => {
                let phase = a.conj() / a.norm();
                PureState { n: self.n, amps: self.amps.iter().map(|x| x * phase).collect() }
            }
            None => self.clone(),
        }
    }
}

/// Basis index of `P_σ|x⟩`: output qubit `i` carries input qubit `σ(i)`.
pub(crate) fn permute_index(n: usize, sigma: &Permutation, x: usize) -> usize {
    let mut y = 0;
    for i in 0..n {
        if x & qubit_bit(n, sigma.apply(i)) != 0 {
            y |= qubit_bit(n, i);
        }
    }
    y
}

fn dimension_to_qubits(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Parse(format!("dimension {dim} is not a power of two >= 2")));
    }
    let n = dim.trailing_zeros() as usize;
    check_qubits(n, MAX_QUBITS)?;
    Ok(n)
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<C64> {
    a.inner(b)
}

/// Acceptance probability of the SWAP test, `(1 + |⟨a|b⟩|²)/2`.
pub fn swap_test_prob(a: &PureState, b: &PureState) -> Result<f64> {
    Ok((1.0 + a.fidelity(b)?) / 2.0)
}

/// One run of the SWAP test: `true` means accept.
pub fn swap_test_sample<R: Rng + ?Sized>(a: &PureState, b: &PureState, rng: &mut R) -> Result<bool> {
    let p = swap_test_prob(a, b)?;
    Ok(rng.gen::<f64>() < p)
}

/// Acceptance probability obtained by simulating the SWAP-test circuit itself:
/// an ancilla in `|+⟩` controls a swap of the two registers, is rotated back by
/// a Hadamard and accepted on outcome 0.
pub fn swap_test_circuit_prob(a: &PureState, b: &PureState) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    check_qubits(2 * a.n + 1, MAX_QUBITS)?;
    let joint = a.tensor(b)?;
    let d = a.dim();
    // Ancilla branch 0 keeps |a⟩|b⟩, branch 1 holds the swapped registers.
    // After the final Hadamard the ancilla-0 amplitude is (|ab⟩ + |ba⟩)/2.
    let mut accept = 0.0;
    for i in 0..d {
        for j in 0..d {
            let amp = (joint.amps[i * d + j] + joint.amps[j * d + i]) * 0.5;
            accept += amp.norm_sqr();
        }
    }
    Ok(accept)
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        PureState::from_amplitudes(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
