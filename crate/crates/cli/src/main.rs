use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fks_core::catalog;
use fks_core::exactla::fmt_int_vec;
use fks_core::format::{emit, parse_document, parse_seed_metric, InputDocument};
use fks_core::matgroup::DEFAULT_CLOSURE_CAP;
use fks_core::report;
use fks_core::{build, BuildOptions, BuildOutcome};

const CAP_VAR: &str = "FKS_CLOSURE_CAP";

#[derive(Parser)]
#[command(
    name = "fks",
    version,
    about = "Flat Kähler solvmanifolds from extension data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks and finiteness of the action.
    Validate { file: PathBuf },
    /// Runs every condition and builds the model.
    Build {
        file: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        /// Seed form averaged into the invariant metric.
        #[arg(long, value_name = "FILE")]
        seed_metric: Option<PathBuf>,
    },
    /// One-line verdict.
    Classify { file: PathBuf },
    /// First Betti number and torsion of the abelianization.
    Abelianize { file: PathBuf },
    /// Lists the built-in examples or prints one.
    Examples { name: Option<String> },
}

/// Exit status 2 with a message.
struct Malformed(String);

impl<E: std::fmt::Display> From<E> for Malformed {
    fn from(e: E) -> Self {
        Malformed(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Malformed> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text =
            fs::read_to_string(path).map_err(|e| Malformed(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load(path: &Path) -> Result<InputDocument, Malformed> {
    let text = read_input(path)?;
    parse_document(&text).map_err(|e| Malformed(format!("{}: {e}", path.display())))
}

fn closure_cap() -> Result<usize, Malformed> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Malformed(format!("{CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CLOSURE_CAP),
    }
}

fn options(doc: &InputDocument, seed: Option<&Path>) -> Result<BuildOptions, Malformed> {
    let seed = match seed {
        Some(p) => Some(
            parse_seed_metric(&read_input(p)?)
                .map_err(|e| Malformed(format!("{}: {e}", p.display())))?,
        ),
        None => doc.seed.clone(),
    };
    Ok(BuildOptions {
        closure_cap: closure_cap()?,
        j0: doc.j0.clone(),
        j1: doc.j1.clone(),
        b: doc.b.clone(),
        seed,
    })
}

fn outcome(doc: &InputDocument, seed: Option<&Path>) -> Result<BuildOutcome, Malformed> {
    Ok(build(&doc.data, &options(doc, seed)?)?)
}

fn status(accepted: bool) -> ExitCode {
    ExitCode::from(if accepted { 0 } else { 1 })
}

/// Writes a line to stdout; a closed pipe is not an error.
fn say(line: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("fks: {e}");
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn run(cli: Cli) -> Result<ExitCode, Malformed> {
    match cli.command {
        Command::Validate { file } => {
            let doc = load(&file)?;
            let v = report::validation_report(doc.name.as_deref(), &doc.data, closure_cap()?);
            say(&pretty(&v));
            let ok = v["valid"] == true && v["condition_a"]["status"] == "pass";
            Ok(status(ok))
        }
        Command::Build {
            file,
            json,
            seed_metric,
        } => {
            let doc = load(&file)?;
            let out = outcome(&doc, seed_metric.as_deref())?;
            let v = report::build_report(doc.name.as_deref(), &doc.data, &out);
            match json {
                Some(path) => {
                    fs::write(&path, pretty(&v) + "\n")
                        .map_err(|e| Malformed(format!("{}: {e}", path.display())))?;
                    say(&out.classification());
                }
                None => say(&pretty(&v)),
            }
            Ok(status(out.model().is_some()))
        }
        Command::Classify { file } => {
            let doc = load(&file)?;
            let out = outcome(&doc, None)?;
            say(&out.classification());
            Ok(status(out.model().is_some()))
        }
        Command::Abelianize { file } => {
            let doc = load(&file)?;
            let a = fks_core::extension::abelianization(&doc.data);
            say(&format!("b1 = {}", a.b1));
            say(&format!("torsion = {}", fmt_int_vec(&a.torsion)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { name: None } => {
            for name in catalog::names() {
                say(name);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { name: Some(name) } => {
            let ex = catalog::example(&name).ok_or_else(|| {
                Malformed(format!(
                    "unknown example {name:?}; known: {}",
                    catalog::names().join(", ")
                ))
            })?;
            say(emit(&ex.document()).trim_end());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Malformed(msg)) => {
            eprintln!("fks: {msg}");
            ExitCode::from(2)
        }
    }
}
