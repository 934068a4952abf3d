//! Simulations of the interactive proofs around state isomorphism: the
//! two-message quantum protocol for non-isomorphism with its amplified and
//! zero-knowledge forms, the classical-description variant for stabilizer
//! states, and the Goldwasser–Sipser set lower bound protocol on `S_G`.
//!
//! Every protocol round draws from a caller-supplied generator; the
//! [`run_trials`] helper derives one independent generator per trial from a
//! master seed so serial and parallel runs agree.

mod gs;
mod sni;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::Permutation;
use crate::rng::{derive_seed, seeded, SeededRng};
use crate::stabilizer::StabilizerDescription;

pub use gs::{
    arthur_verify, build_s_g, gs_protocol, gs_round, merlin_certificate, ssni_classical_protocol,
    gs_protocol_with_set, AffineHash, GSParams, GsCertificate, GsOutcome, SetG, SetGEntry, SsniSession,
};
pub use sni::{
    hlm_distinguish, hlm_from_overlap, no_case_indistinguishability, relaxed_bound, relaxed_check,
    relaxed_guess_bound, sni_amplified, sni_round, zk_view_distance, HlmCase, HlmMode,
    RelaxedReport, SniSession, ZkStage,
};

/// Strategy of the prover in the non-isomorphism protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProverKind {
    /// Runs the guessing procedure with an exact distinguisher.
    Exact,
    /// Runs the guessing procedure with a distinguisher that is right with
    /// probability `p_hlm`.
    Hlm,
    /// Helstrom measurement between the two twirled mixtures.
    Cheat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProverModel {
    pub kind: ProverKind,
    /// Success probability of the stochastic distinguisher, in `(1/2, 1]`.
    pub p_hlm: f64,
    /// Copies of `|Ψ⟩` sent per round; `None` picks [`default_k`].
    pub k: Option<usize>,
}

impl ProverModel {
    pub const DEFAULT_P_HLM: f64 = 2.0 / 3.0;

    pub fn exact() -> Self {
        Self { kind: ProverKind::Exact, p_hlm: 1.0, k: None }
    }

    pub fn hlm(p_hlm: f64) -> Self {
        Self { kind: ProverKind::Hlm, p_hlm, k: None }
    }

    pub fn cheat() -> Self {
        Self { kind: ProverKind::Cheat, p_hlm: Self::DEFAULT_P_HLM, k: None }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_hlm > 0.5 && self.p_hlm <= 1.0) {
            return Err(Error::InvalidInstance(format!("p_hlm = {} outside (1/2, 1]", self.p_hlm)));
        }
        if self.k == Some(0) {
            return Err(Error::InvalidInstance("k must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn hlm_mode(&self) -> HlmMode {
        match self.kind {
            ProverKind::Hlm => HlmMode::Stochastic { p: self.p_hlm },
            _ => HlmMode::Exact,
        }
    }
}

/// `k = ⌈log₂|G| / (1 − ε)⌉`, at least 1.
pub fn default_k(group_order: u64, epsilon: f64) -> usize {
    if epsilon >= 1.0 || group_order <= 1 {
        return 1;
    }
    ((group_order as f64).log2() / (1.0 - epsilon)).ceil().max(1.0) as usize
}

/// What the verifier sent in the first message.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    /// `k` copies of `P_σ|ψ_j⟩` on `n` qubits each.
    Quantum { copies: usize, qubits: usize },
    /// The canonical description of `P_σ|ψ_j⟩`.
    Classical { description: StabilizerDescription },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transcript {
    pub sigma: Permutation,
    pub j: u8,
    pub message: Message,
    pub j_prime: u8,
    pub accept: bool,
}

impl Transcript {
    pub(crate) fn new(sigma: Permutation, j: u8, message: Message, j_prime: u8) -> Self {
        Self { sigma, j, message, j_prime, accept: j == j_prime }
    }
}

/// Aggregate acceptance counts with a normal-approximation 95% radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub trials: u64,
    pub accepts: u64,
    pub freq: f64,
    pub ci95: f64,
}

impl RunStats {
    pub fn from_counts(trials: u64, accepts: u64) -> Self {
        assert!(accepts <= trials, "more accepts than trials");
        let freq = if trials == 0 { 0.0 } else { accepts as f64 / trials as f64 };
        let ci95 = if trials == 0 { 0.0 } else { 1.96 * (freq * (1.0 - freq) / trials as f64).sqrt() };
        Self { trials, accepts, freq, ci95 }
    }

    /// Binomial standard deviation of the frequency under success probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn merge(&self, other: &RunStats) -> RunStats {
        Self::from_counts(self.trials + other.trials, self.accepts + other.accepts)
    }
}

/// One line of per-trial output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j_prime: Option<u8>,
    pub accept: bool,
}

/// Outcome of one trial as seen by the runner.
pub trait TrialOutcome {
    fn record(&self, seed: u64) -> TrialRecord;
}

impl TrialOutcome for Transcript {
    fn record(&self, seed: u64) -> TrialRecord {
        TrialRecord { seed, j: Some(self.j), j_prime: Some(self.j_prime), accept: self.accept }
    }
}

impl TrialOutcome for bool {
    fn record(&self, seed: u64) -> TrialRecord {
        TrialRecord { seed, j: None, j_prime: None, accept: *self }
    }
}

/// Runs `trials` independent trials in parallel. Trial `i` gets its own
/// generator seeded with `derive_seed(master_seed, i)`; records come back in
/// trial order.
pub fn run_trials<T, F>(trials: u64, master_seed: u64, trial: F) -> Result<(Vec<TrialRecord>, RunStats)>
where
    T: TrialOutcome,
    F: Fn(&mut SeededRng) -> Result<T> + Sync,
{
    let records = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(master_seed, i);
            let mut rng = seeded(seed);
            Ok(trial(&mut rng)?.record(seed))
        })
        .collect::<Result<Vec<_>>>()?;
    let accepts = records.iter().filter(|r| r.accept).count() as u64;
    Ok((records, RunStats::from_counts(trials, accepts)))
}

pub(crate) fn random_bit<R: Rng + ?Sized>(rng: &mut R) -> u8 {
    rng.gen::<bool>() as u8
}
