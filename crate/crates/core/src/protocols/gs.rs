use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use super::{random_bit, Message, ProverKind, ProverModel, Transcript, TrialOutcome, TrialRecord};
use crate::enumeration_cap;
use crate::error::{Error, Result};
use crate::permgroup::Permutation;
use crate::problems::SSIInstance;
use crate::stabilizer::{StabilizerDescription, StabilizerTableau};

/// Largest per-side error the default parameters allow.
const GS_TARGET_ERROR: f64 = 0.2;

/// One element `(desc, π)` of `S_G` with a witness `(σ, j)` for the
/// description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetGEntry {
    pub description: StabilizerDescription,
    pub pi: Permutation,
    pub sigma: Permutation,
    pub j: u8,
}

/// `S_G = {(σ(s_{ψ_j}), π) : σ ∈ G, j ∈ {0,1}, π ∈ G, π(σ(s_{ψ_j})) = σ(s_{ψ_j})}`.
#[derive(Clone, Debug, Serialize)]
pub struct SetG {
    n: usize,
    entries: Vec<SetGEntry>,
}

impl SetG {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SetGEntry] {
        &self.entries
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Number of distinct descriptions.
    pub fn orbit_size(&self) -> usize {
        self.entries.iter().map(|e| &e.description).collect::<BTreeSet<_>>().len()
    }

    /// Fixed-length bit encoding: per generator a sign bit and two bits per
    /// letter, then the images of `π` in `⌈log₂ n⌉` bits each.
    pub fn encode(description: &StabilizerDescription, pi: &Permutation) -> Vec<bool> {
        let n = description.n_qubits();
        let width = point_width(n);
        let mut bits = Vec::with_capacity(encoding_len(n));
        for row in description.as_str().split('|') {
            let mut chars = row.chars();
            bits.push(chars.next() == Some('-'));
            for c in chars {
                let (x, z) = match c {
                    'X' => (true, false),
                    'Y' => (true, true),
                    'Z' => (false, true),
                    _ => (false, false),
                };
                bits.push(x);
                bits.push(z);
            }
        }
        for &img in pi.images() {
            bits.extend((0..width).rev().map(|b| (img >> b) & 1 == 1));
        }
        bits
    }
}

fn point_width(n: usize) -> usize {
    (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1) as usize
}

fn encoding_len(n: usize) -> usize {
    n * (2 * n + 1) + n * point_width(n)
}

pub fn build_s_g(inst: &SSIInstance) -> Result<SetG> {
    let elements = inst.group().enumerate(enumeration_cap())?;
    let (t0, t1) = inst.tableaux()?;
    let mut orbit: BTreeMap<StabilizerDescription, (Permutation, u8)> = BTreeMap::new();
    for (j, t) in [(0u8, &t0), (1u8, &t1)] {
        for sigma in &elements {
            let d = t.permute_qubits(sigma)?.description_string();
            orbit.entry(d).or_insert_with(|| (sigma.clone(), j));
        }
    }
    let mut entries = Vec::new();
    for (description, (sigma, j)) in orbit {
        let t = description.to_tableau();
        for pi in &elements {
            if t.permute_qubits(pi)?.description_string() == description {
                entries.push(SetGEntry { description: description.clone(), pi: pi.clone(), sigma: sigma.clone(), j });
            }
        }
    }
    Ok(SetG { n: inst.n_qubits(), entries })
}

/// `h(x) = Ax ⊕ b` from `input_bits` bits to `m ≤ 63` bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineHash {
    m: usize,
    input_bits: usize,
    rows: Vec<Vec<bool>>,
    offset: u64,
}

impl AffineHash {
    pub fn random<R: Rng + ?Sized>(m: usize, input_bits: usize, rng: &mut R) -> Self {
        let rows = (0..m).map(|_| (0..input_bits).map(|_| rng.gen()).collect()).collect();
        let offset = if m == 0 { 0 } else { rng.gen::<u64>() & ((1u64 << m) - 1) };
        Self { m, input_bits, rows, offset }
    }

    pub fn output_bits(&self) -> usize {
        self.m
    }

    pub fn apply(&self, x: &[bool]) -> Result<u64> {
        if x.len() != self.input_bits {
            return Err(Error::LengthMismatch { expected: self.input_bits, found: x.len() });
        }
        let mut out = 0u64;
        for row in &self.rows {
            let bit = row.iter().zip(x).filter(|(a, b)| **a && **b).count() % 2;
            out = (out << 1) | bit as u64;
        }
        Ok(out ^ self.offset)
    }
}

/// Hash length, number of rounds and the number of successful rounds needed
/// to accept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GSParams {
    pub m: usize,
    pub rounds: usize,
    pub threshold: usize,
    pub group_order: u64,
}

impl GSParams {
    /// `m = ⌈log₂|G|⌉ + 2`; rounds and threshold are the smallest that keep
    /// both analytic error bounds at most 0.2.
    pub fn for_group_order(group_order: u64) -> Result<Self> {
        if group_order == 0 {
            return Err(Error::InvalidInstance("empty group".into()));
        }
        let m = (64 - (group_order - 1).leading_zeros()) as usize + 2;
        if m > 63 {
            return Err(Error::InvalidInstance(format!("group order {group_order} too large to hash")));
        }
        let mut params = Self { m, rounds: 1, threshold: 1, group_order };
        let (x, l) = (params.iso_round_bound(), params.noniso_round_bound());
        for rounds in 1..=100_000 {
            let best = (0..=rounds)
                .map(|t| (t, binomial_upper_tail(rounds, x, t), binomial_upper_tail(rounds, l, t)))
                .filter(|&(_, iso, non)| iso <= GS_TARGET_ERROR && 1.0 - non <= GS_TARGET_ERROR)
                .min_by(|a, b| (a.1 + 1.0 - a.2).total_cmp(&(b.1 + 1.0 - b.2)));
            if let Some((t, _, _)) = best {
                params.rounds = rounds;
                params.threshold = t;
                return Ok(params);
            }
        }
        Err(Error::RetriesExhausted(100_000))
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > 63 || self.rounds == 0 || self.threshold > self.rounds {
            return Err(Error::InvalidInstance(format!("bad hash parameters {self:?}")));
        }
        Ok(())
    }

    /// Per-round hit probability is at most `|S|/2^m` when `|S_G| = |G|`.
    pub fn iso_round_bound(&self) -> f64 {
        (self.group_order as f64 / 2f64.powi(self.m as i32)).min(1.0)
    }

    /// Per-round hit probability is at least `s/2^m − s(s−1)/2^{2m+1}` when
    /// `|S_G| = s = 2|G|`, by pairwise independence.
    pub fn noniso_round_bound(&self) -> f64 {
        let big_m = 2f64.powi(self.m as i32);
        let s = 2.0 * self.group_order as f64;
        s / big_m - s * (s - 1.0) / (2.0 * big_m * big_m)
    }

    /// `(upper bound on accepting an isomorphic pair, lower bound on
    /// accepting a non-isomorphic pair)`.
    pub fn acceptance_bounds(&self) -> (f64, f64) {
        (
            binomial_upper_tail(self.rounds, self.iso_round_bound(), self.threshold),
            binomial_upper_tail(self.rounds, self.noniso_round_bound(), self.threshold),
        )
    }
}

/// `Pr[Bin(n, p) ≥ t]`.
fn binomial_upper_tail(n: usize, p: f64, t: usize) -> f64 {
    if t == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return if t <= n { 1.0 } else { 0.0 };
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut ln_binom = 0.0;
    let mut total = 0.0;
    for c in 0..=n {
        if c > 0 {
            ln_binom += ((n - c + 1) as f64).ln() - (c as f64).ln();
        }
        if c >= t {
            total += (ln_binom + c as f64 * lp + (n - c) as f64 * lq).exp();
        }
    }
    total.min(1.0)
}

/// Merlin's claim that `(claimed, π) ∈ S_G` via `claimed = σ(s_{ψ_j})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GsCertificate {
    pub sigma: Permutation,
    pub j: u8,
    pub pi: Permutation,
    pub claimed: StabilizerDescription,
}

/// Honest Merlin: the first element of `S_G` hashing to `y`, if any.
pub fn merlin_certificate(set: &SetG, hash: &AffineHash, y: u64) -> Result<Option<GsCertificate>> {
    for e in &set.entries {
        if hash.apply(&SetG::encode(&e.description, &e.pi))? == y {
            return Ok(Some(GsCertificate {
                sigma: e.sigma.clone(),
                j: e.j,
                pi: e.pi.clone(),
                claimed: e.description.clone(),
            }));
        }
    }
    Ok(None)
}

/// Arthur's checks: `σ, π ∈ G`, the description recomputed from `σ` and `j`
/// matches, `π` fixes it, and it hashes to `y`.
pub fn arthur_verify(inst: &SSIInstance, cert: &GsCertificate, hash: &AffineHash, y: u64) -> Result<bool> {
    let group = inst.group();
    let n = inst.n_qubits();
    if cert.sigma.degree() != n || cert.pi.degree() != n || cert.claimed.n_qubits() != n || cert.j > 1 {
        return Ok(false);
    }
    if !group.contains(&cert.sigma)? || !group.contains(&cert.pi)? {
        return Ok(false);
    }
    let (t0, t1) = inst.tableaux()?;
    let t = if cert.j == 0 { t0 } else { t1 };
    if t.permute_qubits(&cert.sigma)?.description_string() != cert.claimed {
        return Ok(false);
    }
    if cert.claimed.to_tableau().permute_qubits(&cert.pi)?.description_string() != cert.claimed {
        return Ok(false);
    }
    Ok(hash.apply(&SetG::encode(&cert.claimed, &cert.pi))? == y)
}

/// One hash-and-verify round against an honest Merlin.
pub fn gs_round<R: Rng + ?Sized>(inst: &SSIInstance, set: &SetG, params: &GSParams, rng: &mut R) -> Result<bool> {
    let hash = AffineHash::random(params.m, encoding_len(inst.n_qubits()), rng);
    let y = rng.gen::<u64>() & ((1u64 << params.m) - 1);
    match merlin_certificate(set, &hash, y)? {
        Some(cert) => arthur_verify(inst, &cert, &hash, y),
        None => Ok(false),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GsOutcome {
    pub set_size: usize,
    pub rounds: usize,
    pub hits: usize,
    pub threshold: usize,
    pub accept: bool,
}

impl TrialOutcome for GsOutcome {
    fn record(&self, seed: u64) -> TrialRecord {
        TrialRecord { seed, j: None, j_prime: None, accept: self.accept }
    }
}

/// Runs `params.rounds` rounds and accepts (non-isomorphic) when at least
/// `params.threshold` succeed.
pub fn gs_protocol<R: Rng + ?Sized>(inst: &SSIInstance, params: &GSParams, rng: &mut R) -> Result<GsOutcome> {
    let set = build_s_g(inst)?;
    gs_protocol_with_set(inst, &set, params, rng)
}

/// As [`gs_protocol`] with `S_G` built once by the caller.
pub fn gs_protocol_with_set<R: Rng + ?Sized>(
    inst: &SSIInstance,
    set: &SetG,
    params: &GSParams,
    rng: &mut R,
) -> Result<GsOutcome> {
    params.validate()?;
    let mut hits = 0;
    for _ in 0..params.rounds {
        hits += gs_round(inst, set, params, rng)? as usize;
    }
    Ok(GsOutcome {
        set_size: set.len(),
        rounds: params.rounds,
        hits,
        threshold: params.threshold,
        accept: hits >= params.threshold,
    })
}

/// The non-isomorphism protocol with the verifier sending the canonical
/// description of `P_σ|ψ_j⟩` instead of copies of the state.
pub struct SsniSession {
    elements: Vec<Permutation>,
    prover: ProverModel,
    /// Descriptions of `σ(t_j)`, as `[σ][j]`.
    descriptions: Vec<[StabilizerDescription; 2]>,
    /// How many `σ` give each description from `t_0` and from `t_1`.
    counts: BTreeMap<StabilizerDescription, [usize; 2]>,
}

impl SsniSession {
    pub fn new(inst: &SSIInstance, prover: ProverModel) -> Result<Self> {
        prover.validate()?;
        let elements = inst.group().enumerate(enumeration_cap())?;
        let (t0, t1) = inst.tableaux()?;
        let mut descriptions = Vec::with_capacity(elements.len());
        let mut counts: BTreeMap<StabilizerDescription, [usize; 2]> = BTreeMap::new();
        for sigma in &elements {
            let pair = [describe(&t0, sigma)?, describe(&t1, sigma)?];
            for (j, d) in pair.iter().enumerate() {
                counts.entry(d.clone()).or_default()[j] += 1;
            }
            descriptions.push(pair);
        }
        Ok(Self { elements, prover, descriptions, counts })
    }

    /// Maximum-likelihood guess of `j` from the description, ties broken by a
    /// fair coin.
    fn ml_guess<R: Rng + ?Sized>(&self, d: &StabilizerDescription, rng: &mut R) -> u8 {
        let [c0, c1] = self.counts[d];
        match c0.cmp(&c1) {
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Equal => random_bit(rng),
        }
    }

    pub fn round<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Transcript> {
        let s = rng.gen_range(0..self.elements.len());
        let j = random_bit(rng);
        let description = self.descriptions[s][j as usize].clone();
        let mut j_prime = self.ml_guess(&description, rng);
        if self.prover.kind == ProverKind::Hlm && rng.gen::<f64>() >= self.prover.p_hlm {
            j_prime ^= 1;
        }
        Ok(Transcript::new(self.elements[s].clone(), j, Message::Classical { description }, j_prime))
    }
}

fn describe(t: &StabilizerTableau, sigma: &Permutation) -> Result<StabilizerDescription> {
    Ok(t.permute_qubits(sigma)?.description_string())
}

pub fn ssni_classical_protocol<R: Rng + ?Sized>(
    inst: &SSIInstance,
    prover: ProverModel,
    rng: &mut R,
) -> Result<Transcript> {
    SsniSession::new(inst, prover)?.round(rng)
}
