//! Command-line front end for the GHZ secure direct communication simulator.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghz_qsdc::adversary::CouplingBasis;
use ghz_qsdc::quantum::GhzLabel;
use ghz_qsdc::swap::Alphabet;

const EXIT_HELP: &str = "\
Exit status:
  0  success
  1  invalid arguments or input
  2  protocol failure (a group could not be decoded)";

#[derive(Debug, Parser)]
#[command(name = "ghz-qsdc", version, about, after_help = EXIT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Send messages from Alice and Bob to Charlie in one session.
    Qsdc(QsdcArgs),
    /// Distribute keys between each sender and Charlie.
    Qkd(QkdArgs),
    /// Hashing yields and distill/discard verdict for a GHZ-diagonal channel.
    Yield(YieldArgs),
    /// Monte Carlo eavesdropping experiments.
    Attack(AttackArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlphabetArg {
    Pauli4,
    BitFlip,
    BitPhaseFlip,
    PhaseFlip,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Pauli4 => Alphabet::Pauli4,
            AlphabetArg::BitFlip => Alphabet::BitFlip,
            AlphabetArg::BitPhaseFlip => Alphabet::BitPhaseFlip,
            AlphabetArg::PhaseFlip => Alphabet::PhaseFlip,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    Z,
    X,
}

impl From<BasisArg> for CouplingBasis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Z => CouplingBasis::Z,
            BasisArg::X => CouplingBasis::X,
        }
    }
}

fn parse_pair(s: &str) -> Result<(GhzLabel, GhzLabel), String> {
    let (a, b) = s.split_once(',').ok_or("expected two labels, e.g. P+,P+")?;
    Ok((
        a.trim()
            .parse()
            .map_err(|e: ghz_qsdc::Error| e.to_string())?,
        b.trim()
            .parse()
            .map_err(|e: ghz_qsdc::Error| e.to_string())?,
    ))
}

/// Settings shared by the session commands.
#[derive(Debug, Args)]
struct SessionArgs {
    /// Number of groups N (two GHZ triplets each).
    #[arg(long = "n")]
    groups: usize,
    #[arg(long, env = "GHZ_QSDC_SEED", default_value_t = 0)]
    seed: u64,
    /// Alice's encoding scheme index.
    #[arg(long, default_value_t = 0)]
    alice_scheme: usize,
    /// Bob's encoding scheme index.
    #[arg(long, default_value_t = 0)]
    bob_scheme: usize,
    #[arg(long, value_enum, default_value = "pauli4")]
    alice_alphabet: AlphabetArg,
    #[arg(long, value_enum, default_value = "bit-flip")]
    bob_alphabet: AlphabetArg,
    /// Initial GHZ pair shared in every group.
    #[arg(long, value_parser = parse_pair, default_value = "P+,P+")]
    initial_pair: (GhzLabel, GhzLabel),
    /// Write the public transcript as JSON lines.
    #[arg(long, value_name = "PATH")]
    transcript: Option<std::path::PathBuf>,
    #[command(flatten)]
    tamper: TamperArgs,
}

/// Optional interference on every distributed triplet.
#[derive(Debug, Args)]
struct TamperArgs {
    /// Qubit (0, 1 or 2 within a triplet) Eve couples her ancilla to.
    #[arg(long)]
    tamper_qubit: Option<usize>,
    /// Coupling angle in radians; pi copies the qubit.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    tamper_angle: f64,
    #[arg(long, value_enum, default_value = "z")]
    tamper_basis: BasisArg,
}

#[derive(Debug, Args)]
struct QsdcArgs {
    #[command(flatten)]
    session: SessionArgs,
    /// Alice's message as a 0/1 string.
    #[arg(long)]
    alice_bits: String,
    /// Bob's message as a 0/1 string.
    #[arg(long)]
    bob_bits: String,
}

#[derive(Debug, Args)]
struct QkdArgs {
    #[command(flatten)]
    session: SessionArgs,
    /// Directory for the per-pair key files.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct YieldArgs {
    #[arg(long)]
    p000: Option<f64>,
    #[arg(long)]
    p001: Option<f64>,
    #[arg(long)]
    p010: Option<f64>,
    #[arg(long)]
    p011: Option<f64>,
    #[arg(long)]
    p100: Option<f64>,
    #[arg(long)]
    p101: Option<f64>,
    #[arg(long)]
    p110: Option<f64>,
    #[arg(long)]
    p111: Option<f64>,
    #[arg(long)]
    s1: Option<f64>,
    #[arg(long)]
    s2: Option<f64>,
    #[arg(long)]
    s3: Option<f64>,
    #[arg(long)]
    s4: Option<f64>,
    #[arg(long)]
    s5: Option<f64>,
    #[arg(long)]
    s6: Option<f64>,
    #[arg(long)]
    s7: Option<f64>,
    /// JSON file with either "p000".."p111" or "s1".."s7" keys.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
    /// Ensemble size N' for the verdict.
    #[arg(long, default_value_t = 1000)]
    ensemble: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AttackMode {
    /// Guess Charlie's outcome from the public announcements.
    StateGuess,
    /// Guess the transmitted symbols from the public announcements.
    MessageGuess,
    /// Couple an ancilla to the channel and estimate stabilizer error rates.
    Tamper,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[arg(long, value_enum)]
    mode: AttackMode,
    /// Trials, or measurement shots per stabilizer element in tamper mode.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, env = "GHZ_QSDC_SEED", default_value_t = 0)]
    seed: u64,
    /// Give Eve Charlie's outcome (and the schemes, for message guessing).
    #[arg(long)]
    leak: bool,
    /// Run trials on all cores; results do not change.
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 0)]
    alice_scheme: usize,
    #[arg(long, default_value_t = 0)]
    bob_scheme: usize,
    #[arg(long, default_value_t = 2)]
    tamper_qubit: usize,
    #[arg(long, default_value_t = std::f64::consts::PI / 4.0)]
    tamper_angle: f64,
    #[arg(long, value_enum, default_value = "z")]
    tamper_basis: BasisArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Qsdc(args) => commands::qsdc(args),
        Command::Qkd(args) => commands::qkd(args),
        Command::Yield(args) => commands::yields(args),
        Command::Attack(args) => commands::attack(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
