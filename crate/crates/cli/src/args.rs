use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qiso", version, about = "Quantum state isomorphism: instances, oracles, reductions and protocol runs")]
pub struct Cli {
    /// Master seed; required by every randomized subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: u64,

    #[arg(long, global = true, value_enum, default_value_t = ProverArg::Exact)]
    pub prover: ProverArg,

    /// Success probability of the stochastic distinguisher.
    #[arg(long, global = true, default_value_t = 2.0 / 3.0)]
    pub p_hlm: f64,

    /// Copies per round; defaults to ⌈log₂|G| / (1 − ε)⌉.
    #[arg(long, global = true)]
    pub k: Option<usize>,

    /// Distinguisher repetitions the prover majority-votes over.
    #[arg(long, global = true, default_value_t = 1)]
    pub reps: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random instance with a requested oracle label.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Flavor::Random)]
        flavor: Flavor,
    },
    /// Run the brute-force oracle on an instance or graph pair.
    Decide { path: PathBuf },
    /// Apply a reduction and write the resulting instance.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        input: PathBuf,
    },
    /// Run a protocol campaign on an instance.
    Protocol {
        #[arg(value_enum)]
        name: ProtocolName,
        instance: PathBuf,
        /// Per-trial records (JSON lines, or CSV with --format csv).
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Summarize a per-trial record file.
    Stats { records: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProverArg {
    Exact,
    Hlm,
    Cheat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Si,
    Ssi,
    Msi,
    GraphPair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Flavor {
    Yes,
    No,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    /// Graph pair to an SSI instance on graph states.
    Gi,
    /// A circuit in Q_{2n,n} to the MSI instance against its marginals.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    /// Two-message quantum protocol.
    Sni,
    /// Classical-description variant for stabilizer instances.
    Ssni,
    /// Set lower bound protocol on S_G.
    Gs,
    /// Verifier view distances against the simulator.
    Zk,
    /// Trace distance of the twirled k-copy mixtures.
    Nocase,
    /// Relaxed-promise bound check.
    Relaxed,
}
