//! `qiso`: instance generation, oracle decisions, reductions and protocol
//! campaigns.
//!
//! Exit codes: 0 YES / accept, 1 NO / reject, 2 promise violation, 3 error.
//! Protocol campaigns and `stats` count as accepting when the acceptance
//! frequency is at least 7/12.

mod args;
mod gen;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use qiso::problems::{
    decide_msi, decide_si, decide_ssi, graph_iso_bruteforce, reduce_gi_to_ssi, reduce_productstate_to_msi,
    Instance, PromiseLabel, SIInstance, SSIInstance,
};
use qiso::protocols::{
    build_s_g, default_k, gs_protocol_with_set, no_case_indistinguishability, relaxed_check, run_trials,
    zk_view_distance, GSParams, ProverModel, RunStats, SniSession, SsniSession, TrialRecord, ZkStage,
};
use qiso::rng::seeded;
use qiso::{enumeration_cap, Circuit, Error, Graph, Result};
use serde::{Deserialize, Serialize};

use args::{Cli, Command, Format, ProtocolName, ProverArg, ReduceKind};
use output::Output;

const EXIT_ERROR: u8 = 3;

/// Two graphs to test for isomorphism.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphPair {
    kind: String,
    g: Graph,
    h: Graph,
}

impl GraphPair {
    pub fn new(g: Graph, h: Graph) -> Self {
        Self { kind: "graph-pair".into(), g, h }
    }
}

enum Input {
    Instance(Instance),
    Graphs(GraphPair),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("kind").and_then(|k| k.as_str()) == Some("graph-pair") {
        Ok(Input::Graphs(serde_json::from_value(value)?))
    } else {
        Ok(Input::Instance(serde_json::from_value(value)?))
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    match read_input(path)? {
        Input::Instance(i) => Ok(i),
        Input::Graphs(_) => Err(Error::InvalidInstance("expected an SI, SSI or MSI instance".into())),
    }
}

fn pure_instance(inst: &Instance) -> Result<&SIInstance> {
    match inst {
        Instance::Si(i) => Ok(i),
        Instance::Ssi(i) => Ok(i.as_si()),
        Instance::Msi(_) => Err(Error::InvalidInstance("protocol needs a pure-state instance".into())),
    }
}

fn stabilizer_instance(inst: &Instance) -> Result<&SSIInstance> {
    match inst {
        Instance::Ssi(i) => Ok(i),
        _ => Err(Error::InvalidInstance("protocol needs an SSI instance".into())),
    }
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    MissingSeed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::MissingSeed => f.write_str("--seed is required for randomized runs"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Campaigns exit 0 when the acceptance frequency clears the midpoint of the
/// 2/3 completeness and 1/2 soundness levels.
const CAMPAIGN_ACCEPT: f64 = 7.0 / 12.0;

fn require_seed(cli: &Cli) -> CliResult<u64> {
    cli.seed.ok_or(Failure::MissingSeed)
}

fn prover_model(cli: &Cli) -> ProverModel {
    let base = match cli.prover {
        ProverArg::Exact => ProverModel::exact(),
        ProverArg::Hlm => ProverModel::hlm(cli.p_hlm),
        ProverArg::Cheat => ProverModel::cheat(),
    };
    ProverModel { k: cli.k, ..base }
}

fn copies(cli: &Cli, inst: &SIInstance) -> Result<usize> {
    Ok(match cli.k {
        Some(k) => k,
        None => default_k(inst.group().check_cap(enumeration_cap())?, inst.epsilon()),
    })
}

#[derive(Serialize)]
struct DecideRow {
    kind: String,
    label: String,
    value: f64,
    witness: String,
}

fn decide(cli: &Cli, path: &Path, out: &mut Output) -> Result<u8> {
    let (kind, label) = match read_input(path)? {
        Input::Graphs(pair) => {
            let label = match graph_iso_bruteforce(&pair.g, &pair.h)? {
                Some(witness) => PromiseLabel::Yes { witness, value: 1.0 },
                None => PromiseLabel::No { value: 0.0 },
            };
            ("graph-pair", label)
        }
        Input::Instance(inst) => {
            let label = match &inst {
                Instance::Si(i) => decide_si(i)?,
                Instance::Ssi(i) => decide_ssi(i)?,
                Instance::Msi(i) => decide_msi(i)?,
            };
            (inst.kind(), label)
        }
    };
    match cli.format {
        Format::Json => {
            let mut value = serde_json::to_value(&label)?;
            value["kind"] = kind.into();
            out.json_line(&value)?;
        }
        Format::Csv => {
            let witness = label
                .witness()
                .map(|w| w.one_based().iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            out.csv(&[DecideRow { kind: kind.into(), label: label.name().into(), value: label.value(), witness }])?;
        }
    }
    Ok(label.exit_code() as u8)
}

fn reduce(kind: ReduceKind, input: &Path, out: &mut Output) -> Result<u8> {
    let inst = match kind {
        ReduceKind::Gi => match read_input(input)? {
            Input::Graphs(pair) => Instance::Ssi(reduce_gi_to_ssi(&pair.g, &pair.h)?),
            Input::Instance(_) => return Err(Error::InvalidInstance("expected a graph-pair file".into())),
        },
        ReduceKind::Product => {
            let q: Circuit = serde_json::from_str(&fs::read_to_string(input)?)?;
            Instance::Msi(reduce_productstate_to_msi(&q)?)
        }
    };
    out.pretty(&inst)?;
    Ok(0)
}

#[derive(Serialize)]
struct CampaignSummary {
    protocol: &'static str,
    prover: &'static str,
    seed: u64,
    k: Option<usize>,
    reps: usize,
    trials: u64,
    accepts: u64,
    freq: f64,
    ci95: f64,
}

fn protocol(cli: &Cli, name: ProtocolName, path: &Path, records: Option<&Path>, out: &mut Output) -> CliResult<u8> {
    let inst = read_instance(path)?;
    let prover = prover_model(cli);
    let (label, k, (rows, stats)) = match name {
        ProtocolName::Sni => {
            let si = pure_instance(&inst)?;
            let session = SniSession::new(si, prover, cli.reps)?;
            let seed = require_seed(cli)?;
            ("sni", Some(session.copies()), run_trials(cli.trials, seed, |rng| session.round(rng))?)
        }
        ProtocolName::Ssni => {
            let session = SsniSession::new(stabilizer_instance(&inst)?, prover)?;
            let seed = require_seed(cli)?;
            ("ssni", None, run_trials(cli.trials, seed, |rng| session.round(rng))?)
        }
        ProtocolName::Gs => {
            let ssi = stabilizer_instance(&inst)?;
            let set = build_s_g(ssi)?;
            let params = GSParams::for_group_order(ssi.group().check_cap(enumeration_cap())?)?;
            let seed = require_seed(cli)?;
            ("gs", None, run_trials(cli.trials, seed, |rng| gs_protocol_with_set(ssi, &set, &params, rng))?)
        }
        ProtocolName::Zk => return Ok(zk(cli, pure_instance(&inst)?, prover, out)?),
        ProtocolName::Nocase => {
            let si = pure_instance(&inst)?;
            let k = copies(cli, si)?;
            let distance = no_case_indistinguishability(si, k)?;
            out.record(cli.format, &[NoCaseRow { k, trace_distance: distance }])?;
            return Ok(0);
        }
        ProtocolName::Relaxed => {
            let si = pure_instance(&inst)?;
            let report = relaxed_check(si, copies(cli, si)?)?;
            out.record(cli.format, &[report])?;
            return Ok(if report.holds { 0 } else { 1 });
        }
    };
    if let Some(path) = records {
        let mut rec = Output::file(path);
        match cli.format {
            Format::Json => rows.iter().try_for_each(|r| rec.json_line(r))?,
            Format::Csv => rec.csv(&rows.iter().map(CsvRecord::from).collect::<Vec<_>>())?,
        }
        rec.finish()?;
    }
    let summary = CampaignSummary {
        protocol: label,
        prover: match cli.prover {
            ProverArg::Exact => "exact",
            ProverArg::Hlm => "hlm",
            ProverArg::Cheat => "cheat",
        },
        seed: cli.seed.unwrap_or_default(),
        k,
        reps: cli.reps,
        trials: stats.trials,
        accepts: stats.accepts,
        freq: stats.freq,
        ci95: stats.ci95,
    };
    out.record(cli.format, &[summary])?;
    Ok(if stats.freq >= CAMPAIGN_ACCEPT { 0 } else { 1 })
}

#[derive(Serialize)]
struct NoCaseRow {
    k: usize,
    trace_distance: f64,
}

#[derive(Serialize)]
struct ZkRow {
    k: usize,
    after_first_message: f64,
    final_view: f64,
}

fn zk(cli: &Cli, si: &SIInstance, prover: ProverModel, out: &mut Output) -> Result<u8> {
    let k = copies(cli, si)?;
    let row = ZkRow {
        k,
        after_first_message: zk_view_distance(si, ZkStage::AfterFirstMessage, k, prover)?,
        final_view: zk_view_distance(si, ZkStage::Final, k, prover)?,
    };
    out.record(cli.format, &[row])?;
    Ok(0)
}

/// Flat record for CSV, which has no notion of a missing column.
#[derive(Serialize)]
struct CsvRecord {
    seed: u64,
    j: String,
    j_prime: String,
    accept: bool,
}

impl From<&TrialRecord> for CsvRecord {
    fn from(r: &TrialRecord) -> Self {
        let opt = |v: Option<u8>| v.map(|x| x.to_string()).unwrap_or_default();
        Self { seed: r.seed, j: opt(r.j), j_prime: opt(r.j_prime), accept: r.accept }
    }
}

fn stats(cli: &Cli, path: &Path, out: &mut Output) -> Result<u8> {
    let text = fs::read_to_string(path)?;
    let accepts: Vec<bool> = match cli.format {
        Format::Json => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Ok(serde_json::from_str::<TrialRecord>(l)?.accept))
            .collect::<Result<_>>()?,
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            let mut v = Vec::new();
            for row in reader.deserialize::<CsvAccept>() {
                v.push(row.map_err(|e| Error::Parse(e.to_string()))?.accept);
            }
            v
        }
    };
    let s = RunStats::from_counts(accepts.len() as u64, accepts.iter().filter(|&&a| a).count() as u64);
    out.record(cli.format, &[s])?;
    Ok(if s.freq >= CAMPAIGN_ACCEPT { 0 } else { 1 })
}

#[derive(Deserialize)]
struct CsvAccept {
    accept: bool,
}

fn run(cli: &Cli) -> CliResult<u8> {
    let mut out = match &cli.out {
        Some(p) => Output::file(p),
        None => Output::stdout(),
    };
    let code = match &cli.command {
        Command::Gen { kind, n, flavor } => {
            let mut rng = seeded(require_seed(cli)?);
            match gen::generate(*kind, *n, *flavor, &mut rng)? {
                gen::Generated::Instance(inst) => out.pretty(&inst)?,
                gen::Generated::Graphs(pair) => out.pretty(&pair)?,
            }
            0
        }
        Command::Decide { path } => decide(cli, path, &mut out)?,
        Command::Reduce { kind, input } => reduce(*kind, input, &mut out)?,
        Command::Protocol { name, instance, records } => protocol(cli, *name, instance, records.as_deref(), &mut out)?,
        Command::Stats { records } => stats(cli, records, &mut out)?,
    };
    out.finish()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
