use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::{default_k, random_bit, Message, ProverKind, ProverModel, Transcript};
use crate::enumeration_cap;
use crate::error::{Error, Result};
use crate::permgroup::Permutation;
use crate::problems::SIInstance;
use crate::qsim::{check_qubits, group_twirl_mixture, PureState, C64, MAX_QUBITS};

/// Largest `k·n` for which verifier views are compared.
const ZK_MAX_QUBITS: usize = 10;

/// Threshold above which an overlap counts as an exact fixed point.
const FIX_TOL: f64 = 1e-9;

/// The two promise cases of the distinguisher: some circuit fixes the state,
/// or every circuit moves it by at least `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HlmCase {
    Fixed,
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum HlmMode {
    Exact,
    /// Reports the true case with probability `p`, the other one otherwise.
    Stochastic { p: f64 },
}

fn true_case(max_overlap: f64, delta: f64) -> Result<HlmCase> {
    if max_overlap >= 1.0 - FIX_TOL {
        Ok(HlmCase::Fixed)
    } else if max_overlap <= 1.0 - delta + FIX_TOL {
        Ok(HlmCase::Far)
    } else {
        Err(Error::PromiseViolation(max_overlap))
    }
}

/// Distinguisher outcome given `max_i |⟨ψ|U_i|ψ⟩|`.
pub fn hlm_from_overlap<R: Rng + ?Sized>(max_overlap: f64, delta: f64, mode: HlmMode, rng: &mut R) -> Result<HlmCase> {
    let case = true_case(max_overlap, delta)?;
    Ok(match mode {
        HlmMode::Exact => case,
        HlmMode::Stochastic { p } => {
            if rng.gen::<f64>() < p {
                case
            } else {
                match case {
                    HlmCase::Fixed => HlmCase::Far,
                    HlmCase::Far => HlmCase::Fixed,
                }
            }
        }
    })
}

/// Behavioural model of the distinguisher for a family of qubit permutations
/// `U_i` acting on `state`. The maximal overlap is computed exactly.
pub fn hlm_distinguish<R: Rng + ?Sized>(
    state: &PureState,
    family: &[Permutation],
    delta: f64,
    mode: HlmMode,
    rng: &mut R,
) -> Result<HlmCase> {
    let mut max = 0.0f64;
    for u in family {
        max = max.max(state.inner(&state.permuted(u)?)?.norm());
    }
    hlm_from_overlap(max, delta, mode, rng)
}

/// Precomputed data for repeated rounds of the non-isomorphism protocol on
/// one instance.
///
/// All quantities come from the single-copy Gram matrix of the `2|G|` states
/// `P_a|ψ_x⟩`; `k`-copy inner products are its entrywise `k`-th powers.
pub struct SniSession {
    n: usize,
    delta: f64,
    elements: Vec<Permutation>,
    prover: ProverModel,
    k: usize,
    reps: usize,
    gram: DMatrix<C64>,
    /// `max_π |⟨Ψ|⟨ψ_{j'}| U_π |Ψ⟩|ψ_{j'}⟩|` with `Ψ = P_σ ψ_j`, as `[σ][j][j']`.
    fix: Vec<[[f64; 2]; 2]>,
    /// Helstrom `Pr[guess = j | σ, j]`, as `[σ][j]`.
    helstrom: Option<Vec<[f64; 2]>>,
}

fn vidx(a: usize, x: usize) -> usize {
    2 * a + x
}

impl SniSession {
    /// `reps` is the number of distinguisher runs the prover majority-votes
    /// over; the cheating prover instead measures all `k · reps` copies.
    pub fn new(inst: &SIInstance, prover: ProverModel, reps: usize) -> Result<Self> {
        Self::with_cap(inst, prover, reps, enumeration_cap())
    }

    pub fn with_cap(inst: &SIInstance, prover: ProverModel, reps: usize, cap: u64) -> Result<Self> {
        prover.validate()?;
        if reps == 0 {
            return Err(Error::InvalidInstance("repetitions must be at least 1".into()));
        }
        let elements = inst.group().enumerate(cap)?;
        let g = elements.len();
        let (psi0, psi1) = inst.states()?;
        let mut states = Vec::with_capacity(2 * g);
        for pi in &elements {
            states.push(psi0.permuted(pi)?);
            states.push(psi1.permuted(pi)?);
        }
        let m = states.len();
        let mut gram = DMatrix::<C64>::zeros(m, m);
        for a in 0..m {
            for b in a..m {
                let v = states[a].inner(&states[b])?;
                gram[(a, b)] = v;
                gram[(b, a)] = v.conj();
            }
        }
        let eps = inst.epsilon();
        let k = prover.k.unwrap_or_else(|| default_k(g as u64, eps));
        let index = |p: &Permutation| elements.binary_search(p).expect("group is closed");
        let inverses: Vec<Permutation> = elements.iter().map(Permutation::inverse).collect();
        let mut fix = vec![[[0.0; 2]; 2]; g];
        for (s, sigma) in elements.iter().enumerate() {
            for j in 0..2 {
                for jp in 0..2 {
                    let mut best = 0.0f64;
                    for (p, pi_inv) in inverses.iter().enumerate() {
                        // U_π|Ψ⟩|ψ_{j'}⟩ = P_π|ψ_{j'}⟩ ⊗ P_{π⁻¹}|Ψ⟩ and P_{π⁻¹}P_σ = P_{σ∘π⁻¹}.
                        let first = gram[(vidx(s, j), vidx(p, jp))];
                        let second = gram[(vidx(0, jp), vidx(index(&sigma.compose(pi_inv)?), j))];
                        best = best.max((first * second).norm());
                    }
                    fix[s][j][jp] = best;
                }
            }
        }
        let helstrom = (prover.kind == ProverKind::Cheat).then(|| {
            let copies = (k * reps) as u64;
            let gk = gram.map(|z| z.powu(copies as u32));
            let w = 1.0 / (2.0 * g as f64);
            let coeffs: Vec<f64> = (0..m).map(|i| if i % 2 == 0 { w } else { -w }).collect();
            let p0 = helstrom_guess_first(&gk, &coeffs);
            (0..g).map(|s| [p0[vidx(s, 0)], 1.0 - p0[vidx(s, 1)]]).collect()
        });
        Ok(Self {
            n: inst.n_qubits(),
            delta: 1.0 - eps * eps,
            elements,
            prover,
            k,
            reps,
            gram,
            fix,
            helstrom,
        })
    }

    pub fn copies(&self) -> usize {
        self.k
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    /// `⟨P_a ψ_x | P_b ψ_y⟩` for group indices `a, b`.
    pub fn single_copy_inner(&self, a: usize, x: usize, b: usize, y: usize) -> C64 {
        self.gram[(vidx(a, x), vidx(b, y))]
    }

    /// One distinguisher-based guess: pick `j'`, ask whether some `U_π` fixes
    /// `|Ψ⟩|ψ_{j'}⟩`, answer `j'` if so and `j' ⊕ 1` otherwise.
    fn guess_once<R: Rng + ?Sized>(&self, s: usize, j: usize, rng: &mut R) -> Result<u8> {
        let jp = random_bit(rng);
        let case = hlm_from_overlap(self.fix[s][j][jp as usize], self.delta, self.prover.hlm_mode(), rng)?;
        Ok(if case == HlmCase::Fixed { jp } else { 1 - jp })
    }

    fn reply<R: Rng + ?Sized>(&self, s: usize, j: usize, rng: &mut R) -> Result<u8> {
        if let Some(h) = &self.helstrom {
            return Ok(if rng.gen::<f64>() < h[s][j] { j as u8 } else { 1 - j as u8 });
        }
        let mut ones = 0usize;
        for _ in 0..self.reps {
            ones += self.guess_once(s, j, rng)? as usize;
        }
        Ok(match (2 * ones).cmp(&self.reps) {
            Ordering::Greater => 1,
            Ordering::Less => 0,
            Ordering::Equal => random_bit(rng),
        })
    }

    pub fn round<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Transcript> {
        let s = rng.gen_range(0..self.elements.len());
        let j = random_bit(rng);
        let j_prime = self.reply(s, j as usize, rng)?;
        let message = Message::Quantum { copies: self.k * self.reps, qubits: self.n };
        Ok(Transcript::new(self.elements[s].clone(), j, message, j_prime))
    }

    /// Exact `Pr[j' = j]` for a fixed `(σ, j)`.
    pub fn correct_probability(&self, s: usize, j: usize) -> Result<f64> {
        if let Some(h) = &self.helstrom {
            return Ok(h[s][j]);
        }
        let p_right_case = match self.prover.hlm_mode() {
            HlmMode::Exact => 1.0,
            HlmMode::Stochastic { p } => p,
        };
        let mut q = 0.0;
        for jp in 0..2 {
            let case = true_case(self.fix[s][j][jp], self.delta)?;
            let truth_says_jp = case == HlmCase::Fixed;
            let says_j_when_right = if truth_says_jp { jp == j } else { jp != j };
            q += 0.5 * if says_j_when_right { p_right_case } else { 1.0 - p_right_case };
        }
        Ok(majority_correct(q, self.reps))
    }

    /// Exact acceptance probability averaged over `σ` and `j`.
    pub fn acceptance_probability(&self) -> Result<f64> {
        let mut total = 0.0;
        for s in 0..self.elements.len() {
            for j in 0..2 {
                total += self.correct_probability(s, j)?;
            }
        }
        Ok(total / (2 * self.elements.len()) as f64)
    }
}

/// Probability that a majority of `r` independent votes, each right with
/// probability `q`, is right; ties are broken by a fair coin.
fn majority_correct(q: f64, r: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0f64;
    for c in 0..=r {
        if c > 0 {
            binom *= (r - c + 1) as f64 / c as f64;
        }
        let mass = binom * q.powi(c as i32) * (1.0 - q).powi((r - c) as i32);
        match (2 * c).cmp(&r) {
            Ordering::Greater => total += mass,
            Ordering::Equal => total += 0.5 * mass,
            Ordering::Less => {}
        }
    }
    total
}

/// For `A = Σ c_i |v_i⟩⟨v_i|` given through the Gram matrix of the `v_i`,
/// returns `⟨v_i|Π_+|v_i⟩ + ½⟨v_i|Π_0|v_i⟩` for each `i`, where `Π_±, Π_0`
/// project onto the positive, negative and null eigenspaces of `A` inside the
/// span of the vectors.
fn helstrom_guess_first(gram: &DMatrix<C64>, coeffs: &[f64]) -> Vec<f64> {
    let m = gram.nrows();
    let eig = gram.clone().symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..m).filter(|&i| eig.eigenvalues[i] > 1e-12 * top.max(1e-300)).collect();
    let r = keep.len();
    // Coordinates of v_i in the orthonormal basis V U Λ^{-1/2}: Λ^{1/2} U†.
    let mut y = DMatrix::<C64>::zeros(r, m);
    for (row, &i) in keep.iter().enumerate() {
        let s = eig.eigenvalues[i].sqrt();
        for col in 0..m {
            y[(row, col)] = eig.eigenvectors[(col, i)].conj() * s;
        }
    }
    let c = DMatrix::<C64>::from_diagonal(&DVector::from_iterator(m, coeffs.iter().map(|&x| C64::new(x, 0.0))));
    let a = &y * c * y.adjoint();
    let ea = a.symmetric_eigen();
    let scale = ea.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * scale.max(coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max));
    (0..m)
        .map(|i| {
            let yi = y.column(i);
            (0..r)
                .map(|d| {
                    let weight = match ea.eigenvalues[d] {
                        l if l > tol => 1.0,
                        l if l < -tol => 0.0,
                        _ => 0.5,
                    };
                    weight * ea.eigenvectors.column(d).dotc(&yi).norm_sqr()
                })
                .sum()
        })
        .collect()
}

/// One round of the two-message protocol with the prover answering from
/// `k` copies of `P_σ|ψ_j⟩`.
pub fn sni_round<R: Rng + ?Sized>(inst: &SIInstance, prover: ProverModel, rng: &mut R) -> Result<Transcript> {
    SniSession::new(inst, prover, 1)?.round(rng)
}

/// The protocol with the prover majority-voting over `r` distinguisher runs.
pub fn sni_amplified<R: Rng + ?Sized>(
    inst: &SIInstance,
    prover: ProverModel,
    r: usize,
    rng: &mut R,
) -> Result<Transcript> {
    SniSession::new(inst, prover, r)?.round(rng)
}

/// `D(ρ_0, ρ_1)` for the `k`-copy group twirls of the two states.
pub fn no_case_indistinguishability(inst: &SIInstance, k: usize) -> Result<f64> {
    check_qubits(k * inst.n_qubits(), MAX_QUBITS)?;
    let cap = enumeration_cap();
    let (psi0, psi1) = inst.states()?;
    let rho0 = group_twirl_mixture(&psi0, inst.group(), k, cap)?;
    let rho1 = group_twirl_mixture(&psi1, inst.group(), k, cap)?;
    rho0.trace_distance(&rho1)
}

/// `2√(1 − ε^{2k})`, the trace-norm bound on the twirl difference when some
/// overlap reaches `ε`.
pub fn relaxed_bound(epsilon: f64, k: usize) -> f64 {
    2.0 * (1.0 - epsilon.powi(2 * k as i32)).max(0.0).sqrt()
}

/// `1/2 + √(1 − n^{−4(1−b)/(1−a)})`.
pub fn relaxed_guess_bound(n: usize, a: f64, b: f64) -> f64 {
    0.5 + (1.0 - (n as f64).powf(-4.0 * (1.0 - b) / (1.0 - a))).max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelaxedReport {
    pub k: usize,
    pub epsilon: f64,
    /// `max_σ |⟨ψ_1|P_σ|ψ_0⟩|`.
    pub max_overlap: f64,
    /// `‖ρ_0 − ρ_1‖₁`.
    pub trace_norm: f64,
    /// `relaxed_bound(ε, k)`.
    pub bound: f64,
    /// `relaxed_bound(max_overlap, k)`.
    pub overlap_bound: f64,
    /// Whether the instance meets the relaxed promise `max_overlap ≥ ε`.
    pub promise_holds: bool,
    pub holds: bool,
}

/// Compares the measured twirl distance with the relaxed-promise bound.
pub fn relaxed_check(inst: &SIInstance, k: usize) -> Result<RelaxedReport> {
    if k == 0 {
        return Err(Error::InvalidInstance("k must be at least 1".into()));
    }
    let (psi0, psi1) = inst.states()?;
    let mut max_overlap = 0.0f64;
    for sigma in inst.group().enumerate(enumeration_cap())? {
        max_overlap = max_overlap.max(psi1.inner(&psi0.permuted(&sigma)?)?.norm());
    }
    let max_overlap = max_overlap.min(1.0);
    let trace_norm = 2.0 * no_case_indistinguishability(inst, k)?;
    let epsilon = inst.epsilon();
    let bound = relaxed_bound(epsilon, k);
    let overlap_bound = relaxed_bound(max_overlap, k);
    let promise_holds = max_overlap >= epsilon - 1e-12;
    let holds = trace_norm <= overlap_bound + 1e-9 && (!promise_holds || trace_norm <= bound + 1e-9);
    Ok(RelaxedReport { k, epsilon, max_overlap, trace_norm, bound, overlap_bound, promise_holds, holds })
}

/// Where in the protocol the verifier's view is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZkStage {
    /// Verifier holds `(σ, j)` and `|Ψ⟩^{⊗k}` has just been prepared.
    AfterFirstMessage,
    /// Message qubits traced out, verifier holds `(σ, j, j')`.
    Final,
}

/// Trace distance between the verifier's view in an honest run and the
/// simulator's output. Both views are block diagonal in the classical
/// registers with identical block weights, so the distance is the average of
/// the per-block distances.
pub fn zk_view_distance(inst: &SIInstance, stage: ZkStage, k: usize, prover: ProverModel) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInstance("k must be at least 1".into()));
    }
    match stage {
        ZkStage::AfterFirstMessage => {
            let n = inst.n_qubits();
            check_qubits(k * n, ZK_MAX_QUBITS)?;
            let (psi0, psi1) = inst.states()?;
            let elements = inst.group().enumerate(enumeration_cap())?;
            let mut total = 0.0;
            for sigma in &elements {
                // The simulator applies P_σ^{⊗k} to |ψ_j⟩^{⊗k}.
                let wide = (1..k).fold(sigma.clone(), |acc, _| acc.direct_sum(sigma));
                for psi in [&psi0, &psi1] {
                    let honest = psi.permuted(sigma)?.tensor_power(k)?;
                    let simulated = psi.tensor_power(k)?.permuted(&wide)?;
                    let f = honest.inner(&simulated)?.norm_sqr().min(1.0);
                    total += (1.0 - f).sqrt();
                }
            }
            Ok(total / (2 * elements.len()) as f64)
        }
        ZkStage::Final => {
            // The simulator hands back j' = j; the honest block differs by
            // Pr[j' ≠ j | σ, j].
            let session = SniSession::new(inst, prover.with_k(k), 1)?;
            Ok(1.0 - session.acceptance_probability()?)
        }
    }
}
