//! The `wgdbl` command line: argument grammar, input loading, dispatch to the
//! core library and report formatting.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use wgdbl_core::dblcat::DEFAULT_NMAX;

mod input;
mod ops;
mod sample;

pub use input::{resolve_input, Loaded};

const OPS_HELP: &str = "\
Operations:
  fincat    check
  dblcat    validate | check-wg | discretize | pi0
  companion find | precompanions | comp
  fractions check | build | classify | factor | lift | sample
  bicat     fundamental | marked-paths | fractions | omega
  homotopy  groupoidal | groups | postnikov

Inputs are JSON files. A relative path that does not exist is looked up in
$WGDBL_FIXTURES, then in the bundled fixtures directory.

Exit status: 0 all verdicts pass, 1 a checked property fails, 2 input error.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Module {
    Fincat,
    Dblcat,
    Companion,
    Fractions,
    Bicat,
    Homotopy,
}

impl Module {
    pub fn name(self) -> &'static str {
        match self {
            Module::Fincat => "fincat",
            Module::Dblcat => "dblcat",
            Module::Companion => "companion",
            Module::Fractions => "fractions",
            Module::Bicat => "bicat",
            Module::Homotopy => "homotopy",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "wgdbl", version, about = "Weakly globular double categories on finite presentations", after_help = OPS_HELP)]
pub struct Args {
    pub module: Module,
    pub op: String,
    pub input: Option<PathBuf>,
    /// Largest n for the Segal-type conditions.
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    pub nmax: usize,
    /// Longest path in the marked-paths construction.
    #[arg(long = "max-path-len", default_value_t = 2)]
    pub max_path_len: usize,
    /// Write a GraphViz rendering of the main structure here.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Seed for randomized operations.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the full report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Basepoint for homotopy groups (object name or component `[name]`).
    #[arg(long)]
    pub basepoint: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown command `{0} {1}`")]
    UnknownCommand(String, String),
    #[error("`{0}` needs an input file")]
    MissingInput(String),
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Input(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
}

/// Machine-readable result of one command. Timing is reported on stderr only,
/// so that reports for identical inputs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Option<String>,
    pub input_digest: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: BTreeMap<String, Value>,
    pub output: Option<Value>,
    pub passed: bool,
}

/// Collects verdicts, witnesses and output while an operation runs.
#[derive(Debug, Default)]
pub(crate) struct Ctx {
    pub verdicts: Vec<Verdict>,
    pub witnesses: BTreeMap<String, Value>,
    pub output: Option<Value>,
    pub dot: Option<String>,
    /// The output is a structure meant to be piped into another command.
    pub emits: bool,
}

impl Ctx {
    pub fn verdict(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.verdicts.push(Verdict { name: name.into(), passed });
        passed
    }

    /// Records a verdict, with a witness when it fails.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> Value) -> bool {
        let name = name.into();
        if !passed {
            self.witnesses.insert(name.clone(), witness());
        }
        self.verdict(name, passed)
    }

    pub fn fail(&mut self, name: impl Into<String>, error: impl ToString) {
        let name = name.into();
        self.witnesses.insert(name.clone(), Value::String(error.to_string()));
        self.verdict(name, false);
    }
}

/// Exit status, captured stdout and stderr, and the report if one was made.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr, report: None };
        }
    };
    let start = Instant::now();
    match execute(&args) {
        Ok((report, ctx)) => {
            let mut stderr = String::new();
            let mut stdout = String::new();
            if args.json {
                stdout = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            } else if ctx.emits {
                if let Some(out) = &report.output {
                    stdout = serde_json::to_string_pretty(out).expect("output serializes") + "\n";
                }
                stderr.push_str(&summary(&report));
            } else {
                stdout = summary(&report);
                if let Some(out) = &report.output {
                    stdout.push_str(&serde_json::to_string_pretty(out).expect("output serializes"));
                    stdout.push('\n');
                }
            }
            if let (Some(path), Some(dot)) = (&args.dot, &ctx.dot) {
                if let Err(e) = std::fs::write(path, dot) {
                    let err = CliError::Io { path: path.display().to_string(), message: e.to_string() };
                    return Outcome { code: 2, stdout, stderr: format!("{stderr}error: {err}\n"), report: Some(report) };
                }
            }
            stderr.push_str(&format!("time: {} ms\n", start.elapsed().as_millis()));
            let code = if report.passed { 0 } else { 1 };
            Outcome { code, stdout, stderr, report: Some(report) }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n"), report: None },
    }
}

fn summary(r: &Report) -> String {
    let mut s = format!("wgdbl {}\n", r.command);
    if let (Some(i), Some(d)) = (&r.input, &r.input_digest) {
        s.push_str(&format!("input: {i} (sha256 {d})\n"));
    }
    for v in &r.verdicts {
        s.push_str(&format!("{} {}\n", if v.passed { "pass" } else { "FAIL" }, v.name));
    }
    for (k, w) in &r.witnesses {
        s.push_str(&format!("witness [{k}]: {}\n", serde_json::to_string(w).expect("witness serializes")));
    }
    s.push_str(if r.passed { "result: pass\n" } else { "result: FAIL\n" });
    s
}

fn execute(args: &Args) -> Result<(Report, Ctx), CliError> {
    let command = format!("{} {}", args.module.name(), args.op);
    let needs_input = !(args.module == Module::Fractions && args.op == "sample");
    let loaded = match (&args.input, needs_input) {
        (Some(p), true) => Some(resolve_input(p)?),
        (None, true) => return Err(CliError::MissingInput(command)),
        _ => None,
    };
    let mut ctx = Ctx::default();
    ops::dispatch(args, loaded.as_ref(), &mut ctx)?;
    let passed = ctx.verdicts.iter().all(|v| v.passed);
    let report = Report {
        command,
        input: loaded.as_ref().map(|l| l.display.clone()),
        input_digest: loaded.as_ref().map(|l| digest(l.text.as_bytes())),
        verdicts: std::mem::take(&mut ctx.verdicts),
        witnesses: std::mem::take(&mut ctx.witnesses),
        output: ctx.output.take(),
        passed,
    };
    Ok((report, ctx))
}

/// Directory of the bundled fixtures.
pub fn bundled_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}
