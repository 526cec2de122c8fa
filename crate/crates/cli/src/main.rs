use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;

/// Polynomials, Schur–Cohn root counts and locally constant Hamiltonians.
#[derive(Debug, Parser)]
#[command(name = "qcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    /// Gate on |D_n| relative to the product of the row norms of L_n.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_degeneracy: f64,

    /// Relative tolerance of the degeneracy-vector classification.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_proportionality: f64,

    /// Pass threshold for roundtrip errors and identity residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_residual: f64,
}

/// Polynomial source. Both formats hold the same numbers: `a_j = C_{L-rj}`.
#[derive(Debug, Clone, Args)]
pub struct CoeffInput {
    /// Polynomial JSON `{"coeffs": [[re, im], ...]}`, ascending powers.
    #[arg(long, required_unless_present = "seq", conflicts_with = "seq")]
    pub poly: Option<PathBuf>,

    /// Coefficient sequence JSON `{"c": [[re, im], ...]}`, `C_L` first.
    #[arg(long)]
    pub seq: Option<PathBuf>,

    /// Rescale the coefficients so that E(0) = 1.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Linear,
    Inductive,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selection {
    Designated,
    Alternative,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schur–Cohn determinants and the number of roots inside the unit circle.
    CountRoots {
        #[command(flatten)]
        input: CoeffInput,
    },
    /// Hamiltonian blocks of a polynomial.
    Hamiltonian {
        #[command(flatten)]
        input: CoeffInput,
        #[arg(long, value_enum, default_value_t = Method::Linear)]
        method: Method,
        /// Entry selection of the inductive construction.
        #[arg(long, value_enum, default_value_t = Selection::Designated)]
        selection: Selection,
    },
    /// Polynomial, degeneracy class and signature of a Hamiltonian.
    Reconstruct {
        #[arg(long)]
        hamiltonians: PathBuf,
        /// Boundary values (A, B) at t = L.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
        boundary: Vec<f64>,
        /// Overrides --tol-proportionality.
        #[arg(long)]
        tol: Option<f64>,
        /// Rescale the reconstructed polynomial so that E(0) = 1.
        #[arg(long)]
        normalize: bool,
    },
    /// Polynomial -> Hamiltonian -> polynomial, reporting the coefficient error.
    Roundtrip {
        #[command(flatten)]
        input: CoeffInput,
        #[arg(long, value_enum, default_value_t = Method::Linear)]
        method: Method,
    },
    /// Roots from the independent Aberth iteration.
    Oracle {
        #[command(flatten)]
        input: CoeffInput,
        /// Roots closer than this to |z| = 1 make the count ambiguous.
        #[arg(long, default_value_t = 1e-7)]
        tol_circle: f64,
    },
    /// Residual table of the determinant identities, one row per level.
    VerifyIdentities {
        #[command(flatten)]
        input: CoeffInput,
    },
    /// CSV samples of (t, x, A, B, |E|) on a grid of times and real z.
    Sample {
        #[arg(long)]
        hamiltonians: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true,
              default_values_t = [1.0, 0.0])]
        boundary: Vec<f64>,
        /// Time grid `start:end:count`, endpoints included.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Grid of real z values `start:end:count`.
        #[arg(long, allow_hyphen_values = true)]
        z_real: String,
    },
    /// Seeded sweep of random sequences, with pass/fail counts per invariant.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
}

/// An error raised by the front end itself, as opposed to the library.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub detail: String,
}

impl Failure {
    pub fn new(kind: &'static str, detail: impl Into<String>) -> Self {
        Failure {
            kind,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)
    }
}

impl std::error::Error for Failure {}

/// What a command prints. `ok = false` still prints the body but exits 1;
/// commands that do so put an `"error"` object in the body themselves.
pub struct Emit {
    pub body: String,
    pub ok: bool,
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<qcs_core::Error>() {
        e.kind()
    } else if let Some(f) = err.downcast_ref::<Failure>() {
        f.kind
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        "ParseError"
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        "IoError"
    } else {
        "Error"
    }
}

/// The `{"kind", "detail"}` object under every `"error"` key.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub detail: String,
}

impl ErrorBody {
    pub fn new(kind: &str, detail: impl Into<String>) -> Self {
        ErrorBody {
            kind: kind.to_string(),
            detail: detail.into(),
        }
    }
}

#[derive(Serialize)]
struct ErrorOut {
    error: ErrorBody,
}

fn print_error(kind: &str, detail: &str) {
    let out = ErrorOut {
        error: ErrorBody::new(kind, detail),
    };
    println!("{}", serde_json::to_string(&out).expect("error object serializes"));
}

fn run(cli: Cli) -> anyhow::Result<Emit> {
    let tol = &cli.tol;
    match cli.command {
        Command::CountRoots { input } => commands::count_roots(&input, tol),
        Command::Hamiltonian {
            input,
            method,
            selection,
        } => commands::hamiltonian(&input, method, selection, tol),
        Command::Reconstruct {
            hamiltonians,
            boundary,
            tol: override_tol,
            normalize,
        } => {
            let prop = override_tol.unwrap_or(tol.tol_proportionality);
            commands::reconstruct(&hamiltonians, (boundary[0], boundary[1]), prop, normalize)
        }
        Command::Roundtrip { input, method } => commands::roundtrip(&input, method, tol),
        Command::Oracle { input, tol_circle } => commands::oracle(&input, tol_circle),
        Command::VerifyIdentities { input } => commands::verify_identities(&input, tol),
        Command::Sample {
            hamiltonians,
            boundary,
            t,
            z_real,
        } => commands::sample(&hamiltonians, (boundary[0], boundary[1]), &t, &z_real),
        Command::Corpus { seed, count, dmax } => commands::corpus(seed, count, dmax, tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // clap's message minus the trailing usage block
            let text = e.to_string();
            let detail: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            print_error("UsageError", detail.join(" ").trim_start_matches("error: "));
            return ExitCode::FAILURE;
        }
    };
    match run(cli) {
        Ok(emit) => {
            println!("{}", emit.body.trim_end());
            if emit.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            print_error(error_kind(&err), &format!("{err:#}"));
            ExitCode::FAILURE
        }
    }
}
