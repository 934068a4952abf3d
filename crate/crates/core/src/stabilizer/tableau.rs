use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PauliString;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::permgroup::Permutation;
use crate::qsim::{check_qubits, qubit_bit, Circuit, Gate, PureState, C64, MAX_QUBITS};

/// The stabilizer group of an `n`-qubit state, held as `n` independent
/// commuting Hermitian generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0..0⟩`, stabilized by `Z_1, .., Z_n`.
    pub fn zero_state(n: usize) -> Self {
        let rows = (0..n).map(|q| PauliString::single(n, q, 'Z').expect("q < n")).collect();
        Self { n, rows }
    }

    /// Validates a generator list: `n` strings on `n` qubits with signs `±1`,
    /// pairwise commuting and independent.
    pub fn from_generators(rows: Vec<PauliString>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.n_qubits() != n {
                return Err(Error::InvalidTableau(format!(
                    "generator {} acts on {} qubits, expected {n}",
                    i + 1,
                    r.n_qubits()
                )));
            }
            if !r.is_hermitian() {
                return Err(Error::InvalidTableau(format!("generator {} has phase ±i", i + 1)));
            }
            for (j, s) in rows.iter().enumerate().skip(i + 1) {
                if !r.commutes_with(s) {
                    return Err(Error::InvalidTableau(format!(
                        "generators {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut reduced = rows.clone();
        if rref(&mut reduced).len() < n {
            return Err(Error::InvalidTableau("generators are not independent".into()));
        }
        // Independent commuting Hermitian generators could still contain -I;
        // that is ruled out by independence, since -I has zero bits.
        Ok(Self { n, rows })
    }

    /// Runs a pure Clifford circuit on `|0..0⟩`.
    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        if !circuit.is_pure() {
            return Err(Error::InvalidInstance("stabilizer circuits must be pure".into()));
        }
        let mut t = Self::zero_state(circuit.n_in());
        for g in circuit.gates() {
            t.apply_in_place(g)?;
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn apply_clifford_gate(&self, gate: &Gate) -> Result<Self> {
        let mut t = self.clone();
        t.apply_in_place(gate)?;
        Ok(t)
    }

    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Self> {
        if circuit.n_in() != self.n || !circuit.is_pure() {
            return Err(Error::DimensionMismatch { left: self.n, right: circuit.n_in() });
        }
        let mut t = self.clone();
        for g in circuit.gates() {
            t.apply_in_place(g)?;
        }
        Ok(t)
    }

    /// Conjugates every generator by `gate`.
    pub fn apply_in_place(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::BadIndex { index: q, len: self.n });
            }
        }
        if !gate.is_clifford() {
            return Err(Error::NonClifford(gate.to_string()));
        }
        for row in &mut self.rows {
            conjugate(row, gate);
        }
        Ok(())
    }

    /// Measures `Z` on qubit `q`. Returns the outcome bit and the post-measurement
    /// tableau, which stabilizes `(-1)^outcome Z_q`.
    pub fn measure_z<R: Rng + ?Sized>(&self, q: usize, rng: &mut R) -> Result<(bool, Self)> {
        if q >= self.n {
            return Err(Error::BadIndex { index: q, len: self.n });
        }
        let anti: Vec<usize> = (0..self.n).filter(|&i| self.rows[i].x(q)).collect();
        if let Some((&p, rest)) = anti.split_first() {
            let mut t = self.clone();
            let pivot = t.rows[p].clone();
            for &i in rest {
                t.rows[i].mul_assign_unchecked(&pivot);
            }
            let outcome: bool = rng.gen();
            let mut z = PauliString::single(self.n, q, 'Z')?;
            z.flip_sign(outcome);
            t.rows[p] = z;
            return Ok((outcome, t));
        }
        let canon = self.canonical_form();
        let target = PauliString::single(self.n, q, 'Z')?;
        let found = canon.decompose(&target).expect("Z_q commutes with a maximal group");
        Ok((found.is_negative(), self.clone()))
    }

    /// Unique generator set: reduced row echelon form over GF(2) with column
    /// order `x_1..x_n z_1..z_n`, signs carried along by Pauli multiplication.
    pub fn canonical_form(&self) -> Self {
        let mut rows = self.rows.clone();
        rref(&mut rows);
        Self { n: self.n, rows }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical_form()
    }

    pub fn same_state(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Writes `target` (up to sign) as a product of the rows of a canonical
    /// tableau. Returns the signed product, or `None` if `±target` is not in
    /// the group.
    fn decompose(&self, target: &PauliString) -> Option<PauliString> {
        let mut acc = PauliString::identity(self.n);
        let mut residual = target.clone();
        for row in &self.rows {
            let pivot = pivot_col(row).expect("canonical rows are nonzero");
            if residual.bit(pivot) {
                acc.mul_assign_unchecked(row);
                residual.mul_assign_unchecked(row);
            }
        }
        residual.is_identity_up_to_phase().then_some(acc)
    }

    /// Whether `p` (with its sign) belongs to the stabilizer group.
    pub fn stabilizes(&self, p: &PauliString) -> Result<bool> {
        if p.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: p.n_qubits() });
        }
        Ok(self.canonical_form().decompose(p).is_some_and(|q| q == *p))
    }

    /// `s_ψ`: the canonical generators in order, each as a sign followed by
    /// `n` letters, joined by `|`.
    pub fn description_string(&self) -> StabilizerDescription {
        let canon = self.canonical_form();
        let s = canon
            .rows
            .iter()
            .map(|r| format!("{}{}", if r.is_negative() { '-' } else { '+' }, r.letters()))
            .collect::<Vec<_>>()
            .join("|");
        StabilizerDescription(s)
    }

    /// Description oracle that fails with probability `e^{-n}`.
    pub fn description_string_noisy<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StabilizerDescription> {
        if rng.gen::<f64>() < (-(self.n as f64)).exp() {
            return Err(Error::OracleFailure);
        }
        Ok(self.description_string())
    }

    /// `P_σ S P_σ†`: position `i` receives the tensor factor from `σ(i)`. The
    /// result is recanonicalized.
    pub fn permute_qubits(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: sigma.degree() });
        }
        let rows = self.rows.iter().map(|r| r.permuted_by(sigma.images())).collect();
        Ok(Self { n: self.n, rows }.canonical_form())
    }

    /// Dense state vector with canonical global phase.
    pub fn to_statevector(&self) -> Result<PureState> {
        check_qubits(self.n, MAX_QUBITS)?;
        let n = self.n;
        let canon = self.canonical_form();
        // Rows without X part pin the support: sign·(-1)^{z·b} = 1.
        let mut b = 0usize;
        for row in canon.rows.iter().filter(|r| !r.x_bits().iter().any(|&x| x)) {
            let p = pivot_col(row).expect("nonzero row") - n;
            if row.is_negative() {
                b |= qubit_bit(n, p);
            }
        }
        let mut v = vec![C64::new(0.0, 0.0); 1 << n];
        v[b] = C64::new(1.0, 0.0);
        for row in canon.rows.iter().filter(|r| r.x_bits().iter().any(|&x| x)) {
            let gv = apply_pauli(row, &v);
            for (a, g) in v.iter_mut().zip(gv) {
                *a = (*a + g) * 0.5;
            }
        }
        Ok(PureState::normalized(v)?.canonical_phase())
    }
}

/// Random stabilizer state from a random `{H, S, CNOT}` circuit with
/// `2n² + 8` gates applied to `|0..0⟩`.
pub fn random_stabilizer<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StabilizerTableau> {
    if n == 0 {
        return Err(Error::InvalidInstance("random_stabilizer needs n >= 1".into()));
    }
    let circuit = Circuit::random(n, 2 * n * n + 8, true, rng);
    StabilizerTableau::from_circuit(&circuit)
}

/// Graph state `|G⟩` with generators `K^(v) = X_v Π_{w∈N(v)} Z_w`, in vertex order.
pub fn graph_state(g: &Graph) -> StabilizerTableau {
    let n = g.n_vertices();
    let rows = (0..n)
        .map(|v| {
            let mut p = PauliString::identity(n);
            p.set(v, true, false);
            for w in g.neighbors(v) {
                p.set(w, false, true);
            }
            p
        })
        .collect();
    StabilizerTableau { n, rows }
}

/// `H^{⊗n}` followed by one `CZ` per edge.
pub fn graph_state_circuit(g: &Graph) -> Circuit {
    let n = g.n_vertices();
    let gates = (0..n)
        .map(Gate::H)
        .chain(g.edges().map(|(u, v)| Gate::Cz { control: u, target: v }))
        .collect();
    Circuit::pure(n, gates).expect("edges are in range")
}

/// `|⟨ψ|φ⟩|` for two stabilizer states, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerOverlap {
    Orthogonal,
    /// `2^{-s/2}`.
    Dyadic { s: usize },
}

impl StabilizerOverlap {
    pub fn value(self) -> f64 {
        match self {
            Self::Orthogonal => 0.0,
            Self::Dyadic { s } => 2f64.powf(-(s as f64) / 2.0),
        }
    }

    /// `|⟨ψ|φ⟩|² = 2^{-s}`.
    pub fn squared(self) -> f64 {
        match self {
            Self::Orthogonal => 0.0,
            Self::Dyadic { s } => 2f64.powi(-(s as i32)),
        }
    }
}

/// Exact overlap: the unsigned groups intersect in a subgroup of dimension `d`.
/// A sign disagreement on that intersection means the states are orthogonal,
/// otherwise `|⟨ψ|φ⟩| = 2^{-(n-d)/2}`.
pub fn overlap_exact(a: &StabilizerTableau, b: &StabilizerTableau) -> Result<StabilizerOverlap> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    let n = a.n;
    let stacked: Vec<&PauliString> = a.rows.iter().chain(&b.rows).collect();
    let mut bits: Vec<Vec<bool>> =
        stacked.iter().map(|p| (0..2 * n).map(|c| p.bit(c)).collect()).collect();
    let mut combos: Vec<Vec<bool>> =
        (0..2 * n).map(|i| (0..2 * n).map(|j| i == j).collect()).collect();
    let mut r = 0;
    for col in 0..2 * n {
        let Some(k) = (r..2 * n).find(|&k| bits[k][col]) else { continue };
        bits.swap(r, k);
        combos.swap(r, k);
        for i in 0..2 * n {
            if i != r && bits[i][col] {
                let (br, cr) = (bits[r].clone(), combos[r].clone());
                xor_into(&mut bits[i], &br);
                xor_into(&mut combos[i], &cr);
            }
        }
        r += 1;
    }
    // Rows r.. are zero; their combinations span the left null space.
    for combo in &combos[r..] {
        let mut pa = PauliString::identity(n);
        let mut pb = PauliString::identity(n);
        for (i, _) in combo.iter().enumerate().filter(|(_, &c)| c) {
            if i < n {
                pa.mul_assign_unchecked(&a.rows[i]);
            } else {
                pb.mul_assign_unchecked(&b.rows[i - n]);
            }
        }
        if pa.phase() != pb.phase() {
            return Ok(StabilizerOverlap::Orthogonal);
        }
    }
    let d = 2 * n - r;
    Ok(StabilizerOverlap::Dyadic { s: n - d })
}

pub fn overlap(a: &StabilizerTableau, b: &StabilizerTableau) -> Result<f64> {
    Ok(overlap_exact(a, b)?.value())
}

fn xor_into(dst: &mut [bool], src: &[bool]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

fn pivot_col(p: &PauliString) -> Option<usize> {
    (0..2 * p.n_qubits()).find(|&c| p.bit(c))
}

/// Fully reduces `rows` in place and returns the pivot columns. Zero rows
/// end up at the bottom.
fn rref(rows: &mut [PauliString]) -> Vec<usize> {
    let Some(n) = rows.first().map(|r| r.n_qubits()) else { return Vec::new() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..2 * n {
        let Some(k) = (r..rows.len()).find(|&k| rows[k].bit(col)) else { continue };
        rows.swap(r, k);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.bit(col) {
                row.mul_assign_unchecked(&pivot);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

impl PauliString {
    /// `G P G†` for a Clifford gate `G`.
    pub fn conjugated_by(&self, gate: &Gate) -> Result<PauliString> {
        for q in gate.qubits() {
            if q >= self.n_qubits() {
                return Err(Error::BadIndex { index: q, len: self.n_qubits() });
            }
        }
        if !gate.is_clifford() {
            return Err(Error::NonClifford(gate.to_string()));
        }
        let mut p = self.clone();
        conjugate(&mut p, gate);
        Ok(p)
    }
}

/// Conjugation `G P G†`, written on the sign bit and the symplectic bits.
fn conjugate(p: &mut PauliString, gate: &Gate) {
    match *gate {
        Gate::H(q) => {
            let (x, z) = (p.x(q), p.z(q));
            p.flip_sign(x & z);
            p.set(q, z, x);
        }
        Gate::S(q) => {
            let (x, z) = (p.x(q), p.z(q));
            p.flip_sign(x & z);
            p.set(q, x, z ^ x);
        }
        Gate::X(q) => p.flip_sign(p.z(q)),
        Gate::Z(q) => p.flip_sign(p.x(q)),
        Gate::Cnot { control: c, target: t } => {
            let (xc, zc, xt, zt) = (p.x(c), p.z(c), p.x(t), p.z(t));
            p.flip_sign(xc & zt & !(xt ^ zc));
            p.set(t, xt ^ xc, zt);
            p.set(c, xc, zc ^ zt);
        }
        Gate::Cz { control: a, target: b } => {
            let (xa, za, xb, zb) = (p.x(a), p.z(a), p.x(b), p.z(b));
            p.flip_sign(xa & xb & (za ^ zb));
            p.set(a, xa, za ^ xb);
            p.set(b, xb, zb ^ xa);
        }
        Gate::T(_) => unreachable!("rejected before conjugation"),
    }
}

/// Dense action of a Pauli string: `P|y⟩ = i^{e+#Y} (-1)^{z·y} |y ⊕ x⟩`.
pub(crate) fn apply_pauli(p: &PauliString, v: &[C64]) -> Vec<C64> {
    let n = p.n_qubits();
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    let mut ys = 0u32;
    for q in 0..n {
        if p.x(q) {
            xmask |= qubit_bit(n, q);
        }
        if p.z(q) {
            zmask |= qubit_bit(n, q);
        }
        ys += (p.x(q) & p.z(q)) as u32;
    }
    let unit = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
    let base = (p.phase() as u32 + ys) % 4;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (y, a) in v.iter().enumerate() {
        let e = (base + 2 * ((zmask & y).count_ones() % 2)) % 4;
        out[y ^ xmask] = unit[e as usize] * a;
    }
    out
}

/// The canonical symbol string `s_ψ`, e.g. `"+XX|+ZZ"` for a Bell pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilizerDescription(String);

impl StabilizerDescription {
    /// Parses and validates a description. The generators must form a valid
    /// tableau already in canonical form.
    pub fn parse(s: &str) -> Result<Self> {
        let t = Self::tableau_of(s)?;
        if !t.is_canonical() {
            return Err(Error::Parse(format!("description {s:?} is not in canonical form")));
        }
        Ok(Self(s.to_string()))
    }

    fn tableau_of(s: &str) -> Result<StabilizerTableau> {
        let rows = s
            .split('|')
            .map(|g| {
                if !(g.starts_with('+') || g.starts_with('-')) || g[1..].starts_with('i') {
                    return Err(Error::Parse(format!("generator {g:?} needs a + or - sign")));
                }
                g.parse::<PauliString>()
            })
            .collect::<Result<Vec<_>>>()?;
        StabilizerTableau::from_generators(rows)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn n_qubits(&self) -> usize {
        self.0.split('|').count()
    }

    pub fn to_tableau(&self) -> StabilizerTableau {
        Self::tableau_of(&self.0).expect("validated on construction")
    }
}

impl fmt::Display for StabilizerDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for StabilizerDescription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for StabilizerDescription {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for StabilizerDescription {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        f.write_str(&rows.join("|"))
    }
}
