//! `releq`: batch front end over the releq library.
//!
//! Every run prints its resolved configuration as a `#` comment line, then
//! the payload. `--out` sends the payload to a file (written atomically) and
//! leaves only the comment lines on stdout.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use releq::Units;

#[derive(Parser, Serialize)]
#[command(name = "releq", version, about = "Relative-entropy quantum information toolkit")]
struct Cli {
    /// Unit for every entropy-like output.
    #[arg(long, global = true, default_value = "bits")]
    units: Units,
    /// Seed for randomized commands. RELEQ_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the payload here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Von Neumann entropies, and mutual information for bipartite states.
    Entropy(StateArg),
    /// Holevo quantity of an ensemble, optionally with a measurement's accessible information.
    Holevo {
        #[arg(long)]
        ensemble: PathBuf,
        /// POVM JSON `{"effects":[matrix,...]}`.
        #[arg(long)]
        povm: Option<PathBuf>,
    },
    /// Relative entropy of entanglement by separable-ansatz minimization.
    Ree {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Product terms in the ansatz; defaults to (d_A d_B)².
        #[arg(long)]
        components: Option<usize>,
        /// Also write the closest separable state as DensityMatrix JSON.
        #[arg(long)]
        closest: Option<PathBuf>,
    },
    /// Kraus channel operations.
    #[command(subcommand)]
    Channel(ChannelCommand),
    /// Partial-transpose test of a bipartite state.
    Ppt(StateArg),
    /// Probability that a source emits a type in a candidate set, against the Sanov sandwich.
    Sanov {
        /// Source distribution (ProbDist JSON).
        #[arg(long)]
        q: PathBuf,
        /// JSON array of candidate ProbDists.
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Type-class probability of a fixed type under a source, with its bounds.
    Types {
        #[arg(long)]
        q: PathBuf,
        /// The type (ProbDist JSON); rows appear for every n where it is realizable.
        #[arg(long)]
        p: PathBuf,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
    },
    /// Typical-subspace compression of the two-letter source at angle theta.
    Compress {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_6)]
        theta: f64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Teleport random qubit states and report each Bell outcome.
    TeleportDemo {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Dense-coding capacity C(x) on an even grid over [0, 1].
    DenseCodingCurve {
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Erasure cost -Tr ρ log ω and its split into S(ρ‖ω) + S(ρ).
    Landauer {
        #[arg(long)]
        state: PathBuf,
        /// Reference state; maximally mixed when omitted.
        #[arg(long)]
        omega: Option<PathBuf>,
    },
    /// Thermal bosonic channel capacity and its two limits.
    Bosonic {
        /// Signal power, W.
        #[arg(long)]
        power: f64,
        /// Noise temperature, K.
        #[arg(long)]
        temperature: f64,
    },
    /// Bekenstein information bound and processing rate. Defaults to a hydrogen nucleus.
    Bekenstein {
        /// Energy, J.
        #[arg(long)]
        energy: Option<f64>,
        /// Radius, m.
        #[arg(long, default_value_t = 1e-15)]
        radius: f64,
    },
    /// Deutsch's algorithm on a one-bit function given as its truth table f(0)f(1).
    Deutsch {
        #[arg(long)]
        f: String,
    },
    /// Memory-computer mutual information across Grover iterations.
    GroverMi {
        #[arg(long, default_value_t = 4)]
        qubits: usize,
        /// Per-qubit weight of |0> in the initial computer state.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 40)]
        kmax: usize,
        /// Branch used for the success-probability note.
        #[arg(long, default_value_t = 0)]
        marked: usize,
    },
    /// Mutual information per query for the bitwise oracle.
    BitwiseTrace {
        #[arg(long, default_value_t = 4)]
        qubits: usize,
    },
    /// Run the invariant suite; exit status 0 only if every check passes.
    Selftest {
        /// Only checks whose module/name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(Args, Serialize)]
struct StateArg {
    /// DensityMatrix or Ket JSON.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ChannelCommand {
    /// Output state Φ(ρ).
    Apply {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Unitary dilation U and ancilla |α>.
    Dilate {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Partial-transpose test of the channel's Choi state.
    Ppt {
        #[arg(long)]
        channel: PathBuf,
    },
}

/// Failure with the exit status it maps to.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn invalid(message: impl ToString) -> Self {
        Self { code: 2, message: message.to_string() }
    }
}

impl From<releq::Error> for Failure {
    fn from(e: releq::Error) -> Self {
        Failure::invalid(e)
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim()
}

fn resolve_seed(cli: &mut Cli) -> Result<(), Failure> {
    if let Ok(raw) = std::env::var("RELEQ_SEED") {
        cli.seed = raw.trim().parse().map_err(|_| Failure::invalid(format!("RELEQ_SEED={raw:?} is not a 64-bit integer")))?;
    }
    Ok(())
}

fn run(mut cli: Cli) -> Result<ExitCode, Failure> {
    resolve_seed(&mut cli)?;
    let config = serde_json::to_string(&cli).map_err(Failure::invalid)?;
    let report = commands::dispatch(&cli)?;
    report.emit(&config, cli.out.as_deref())?;
    Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("releq: {}", first_line(&e.to_string()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("releq: error: {}", first_line(&f.message));
            ExitCode::from(f.code)
        }
    }
}
