use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `i^phase · ⊗_q P_q` with `P_q` read from `(x_q, z_q)`: `(0,0)=I`,
/// `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    phase: u8,
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { phase: 0, x: vec![false; n], z: vec![false; n] }
    }

    pub fn new(phase: u8, x: Vec<bool>, z: Vec<bool>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch { expected: x.len(), found: z.len() });
        }
        Ok(Self { phase: phase % 4, x, z })
    }

    /// Single-qubit `X`, `Y` or `Z` on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self> {
        if q >= n {
            return Err(Error::BadIndex { index: q, len: n });
        }
        let mut p = Self::identity(n);
        let (x, z) = letter_bits(letter)?;
        p.x[q] = x;
        p.z[q] = z;
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    /// Exponent `e` of the prefactor `i^e`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q]
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q]
    }

    pub fn set(&mut self, q: usize, x: bool, z: bool) {
        self.x[q] = x;
        self.z[q] = z;
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x[q], self.z[q]) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    /// `true` for `-P`, `false` for `+P`. Only meaningful for Hermitian strings.
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negate();
        p
    }

    pub(crate) fn flip_sign(&mut self, flip: bool) {
        if flip {
            self.negate();
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut acc = false;
        for q in 0..self.n_qubits() {
            acc ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        !acc
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch { left: self.n_qubits(), right: other.n_qubits() });
        }
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        let mut e = self.phase as i32 + other.phase as i32;
        for q in 0..self.n_qubits() {
            e += g(self.x[q], self.z[q], other.x[q], other.z[q]);
            self.x[q] ^= other.x[q];
            self.z[q] ^= other.z[q];
        }
        self.phase = e.rem_euclid(4) as u8;
    }

    /// Tensor factors rearranged so position `i` holds the factor from `σ(i)`.
    pub(crate) fn permuted_by(&self, images: &[usize]) -> PauliString {
        PauliString {
            phase: self.phase,
            x: images.iter().map(|&j| self.x[j]).collect(),
            z: images.iter().map(|&j| self.z[j]).collect(),
        }
    }

    /// The `2n` symplectic bits in column order `x_1..x_n z_1..z_n`.
    pub(crate) fn bit(&self, col: usize) -> bool {
        let n = self.n_qubits();
        if col < n {
            self.x[col]
        } else {
            self.z[col - n]
        }
    }

    /// Letters without the sign, e.g. `"XZI"`.
    pub fn letters(&self) -> String {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis
/// `(x1,z1)·(x2,z2)`.
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

fn letter_bits(c: char) -> Result<(bool, bool)> {
    match c {
        'I' => Ok((false, false)),
        'X' => Ok((true, false)),
        'Y' => Ok((true, true)),
        'Z' => Ok((false, true)),
        other => Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}{}", self.letters())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional sign prefix (`+`, `-`, `+i`, `-i`, `i`) followed by
    /// letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        if rest.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        let mut x = Vec::with_capacity(rest.len());
        let mut z = Vec::with_capacity(rest.len());
        for c in rest.chars() {
            let (xb, zb) = letter_bits(c)?;
            x.push(xb);
            z.push(zb);
        }
        Ok(PauliString { phase, x, z })
    }
}
