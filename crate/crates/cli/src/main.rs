//! `qlat`: runs verification campaigns, checks user-supplied property
//! families and audits statement sets against a pure state.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 for
//! usage or input errors, 3 for I/O errors.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use qlat_core::campaign::{
    run_experiment, verify_family, ExperimentConfig, StateDocument, SEED_ENV,
};
use qlat_core::domains::PureStateModel;
use qlat_core::lattice::PropertyFamily;
use qlat_core::semantics::{completeness_audit, ev_evaluate, parse_statements, AuditMode, Verdict};
use qlat_core::{QlatError, Tolerances};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qlat",
    version,
    about = "Quantum property lattice verification toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded verification campaign described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed and QLAT_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Pins every instance to this dimension.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        /// Report path; defaults to the config's output_path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the lattice laws and domain equalities on a property family.
    VerifyFamily {
        #[arg(long)]
        family: PathBuf,
        /// Seed for the Haar states added to the family's own atoms.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        states: usize,
        /// Writes the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Completeness audit of a statement list in a pure state.
    Audit {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// One prefix statement per line; blank lines and `#` comments skipped.
        #[arg(long)]
        statements: PathBuf,
        #[arg(long, default_value = "standard")]
        mode: AuditMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<QlatError> for CliError {
    fn from(e: QlatError) -> Self {
        match e {
            QlatError::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn in_file(path: &Path, e: impl fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn load_family(path: &Path, tol: &Tolerances) -> Result<PropertyFamily, CliError> {
    PropertyFamily::from_json(&read(path)?, tol).map_err(|e| in_file(path, e))
}

fn run(
    config: &Path,
    seed: Option<u64>,
    dim: Option<usize>,
    instances: Option<usize>,
    out: Option<PathBuf>,
) -> Result<bool, CliError> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?).map_err(|e| in_file(config, e))?;
    if let Ok(text) = std::env::var(SEED_ENV) {
        cfg.seed = text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{SEED_ENV}: expected an unsigned integer, got `{text}`"
            ))
        })?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(d) = dim {
        cfg.dim = d;
        cfg.max_dim = None;
    }
    if let Some(n) = instances {
        cfg.instances = n;
    }
    let report = run_experiment(&cfg)?;
    let path = out.unwrap_or_else(|| PathBuf::from(&cfg.output_path));
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
    write(&path, &text)?;
    let a = &report.aggregate;
    println!(
        "{}: {} passed, {} failed, max residual {:.3e}, {:.2} s -> {}",
        cfg.experiment,
        a.pass,
        a.fail,
        a.max_residual,
        a.wall_time_s,
        path.display()
    );
    Ok(a.fail == 0)
}

fn verify(family: &Path, seed: u64, states: usize, out: Option<PathBuf>) -> Result<bool, CliError> {
    let tol = Tolerances::default();
    let family = load_family(family, &tol)?;
    let report = verify_family(&family, &tol, seed, states)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(out.as_deref(), &text)?;
    eprintln!(
        "{} checks passed, {} failed",
        report.aggregate.pass, report.aggregate.fail
    );
    Ok(report.aggregate.fail == 0)
}

fn audit(
    family: &Path,
    state: &Path,
    statements: &Path,
    mode: AuditMode,
    out: Option<PathBuf>,
) -> Result<bool, CliError> {
    let tol = Tolerances::default();
    let fam = load_family(family, &tol)?;
    let doc: StateDocument = serde_json::from_str(&read(state)?).map_err(|e| in_file(state, e))?;
    let psi = doc.to_ket().map_err(|e| in_file(state, e))?;
    if psi.dim() != fam.dim() {
        return Err(in_file(
            state,
            format!(
                "state has dimension {}, family has {}",
                psi.dim(),
                fam.dim()
            ),
        ));
    }
    let stmts = parse_statements(&read(statements)?).map_err(|e| in_file(statements, e))?;
    let model = PureStateModel::new(psi);
    let result = completeness_audit(&model, &fam, &stmts, mode, &tol)?;
    let evaluations = stmts
        .iter()
        .map(|s| {
            let ev = ev_evaluate(s, &model, &fam, &tol)?;
            Ok(json!({ "statement": s.to_string(), "evaluation": ev }))
        })
        .collect::<Result<Vec<_>, QlatError>>()?;
    let text =
        serde_json::to_string_pretty(&json!({ "audit": result, "evaluations": evaluations }))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(out.as_deref(), &text)?;
    eprintln!(
        "{} audit: {} ({} meaningful, {} predictable{})",
        if mode == AuditMode::Sr {
            "sr"
        } else {
            "standard"
        },
        if result.verdict == Verdict::Complete {
            "complete"
        } else {
            "incomplete"
        },
        result.meaningful.len(),
        result.predictable.len(),
        result
            .witness
            .as_ref()
            .map(|w| format!(", witness {w}"))
            .unwrap_or_default()
    );
    // an incomplete verdict is a finding, not a failed check
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            seed,
            dim,
            instances,
            out,
        } => run(&config, seed, dim, instances, out),
        Command::VerifyFamily {
            family,
            seed,
            states,
            out,
        } => verify(&family, seed, states, out),
        Command::Audit {
            family,
            state,
            statements,
            mode,
            out,
        } => audit(&family, &state, &statements, mode, out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("qlat: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Io(_) => EXIT_IO,
            })
        }
    }
}
