//! Command-line front end.
//!
//! Exit codes: 0 completed, 2 usage, 3 unreadable or malformed model file,
//! 4 invalid model or evaluation error, 5 timeout, 6 state cap, 7 `--compare`
//! disagreement, 8 memory cap.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use super::generate::{generate, Family};
use super::modelfile::read_model;
use super::report::{write_csv, write_json, write_text, RunReport};
use crate::model::LpnSystem;
use crate::reach::{dfs_reach, Limits, Termination};
use crate::store::{make_store, Backend, DEFAULT_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_MODEL: i32 = 4;
pub const EXIT_TIMEOUT: i32 = 5;
pub const EXIT_STATE_CAP: i32 = 6;
pub const EXIT_MISMATCH: i32 = 7;
pub const EXIT_MEMORY_CAP: i32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Explicit-state reachability for labeled Petri nets.
#[derive(Debug, Parser)]
#[command(name = "lpn-reach", version)]
pub struct Args {
    /// Model file to explore.
    #[arg(long, value_name = "PATH", conflicts_with = "generate", required_unless_present = "generate")]
    pub model: Option<PathBuf>,
    /// Built-in model family.
    #[arg(long, value_name = "FAMILY", requires = "n")]
    pub generate: Option<Family>,
    /// Size parameter of the generated model.
    #[arg(long, value_name = "N", requires = "generate")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Backend::Hash)]
    pub backend: Backend,
    /// Hybrid buffer size in states.
    #[arg(long, value_name = "STATES", default_value_t = DEFAULT_THRESHOLD, value_parser = positive)]
    pub threshold: usize,
    /// Wall-clock budget per run; 0 disables it.
    #[arg(long, value_name = "SECONDS", default_value_t = 900.0)]
    pub time_limit: f64,
    #[arg(long, value_name = "N")]
    pub max_states: Option<usize>,
    /// Cap on the store's estimated peak size; 0 disables it.
    #[arg(long, value_name = "MB", default_value_t = 2048)]
    pub memory_limit: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also run these backends and check that state counts agree.
    #[arg(long, value_enum, value_delimiter = ',', value_name = "BACKEND[,BACKEND...]")]
    pub compare: Vec<Backend>,
    /// Write the local-state tables and the final store of the main run here.
    #[arg(long, value_name = "PATH")]
    pub dump_store: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl Args {
    fn limits(&self) -> Result<Limits, String> {
        if !self.time_limit.is_finite() || self.time_limit < 0.0 {
            return Err(format!("invalid --time-limit {}", self.time_limit));
        }
        Ok(Limits {
            max_states: self.max_states,
            time_limit: (self.time_limit > 0.0).then(|| Duration::from_secs_f64(self.time_limit)),
            memory_limit: (self.memory_limit > 0).then(|| self.memory_limit.saturating_mul(1 << 20)),
        })
    }
}

enum Failure {
    Exit(i32, String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&args, out) {
        Ok(code) => code,
        Err(Failure::Exit(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn load(args: &Args) -> Result<(String, LpnSystem), Failure> {
    if let Some(path) = &args.model {
        let system = read_model(path).map_err(|e| {
            let code = if e.is_syntax() { EXIT_PARSE } else { EXIT_MODEL };
            Failure::Exit(code, format!("{}: {e}", path.display()))
        })?;
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((name, system));
    }
    let family = args.generate.expect("clap requires --model or --generate");
    let n = args.n.expect("clap requires --n with --generate");
    let system = generate(family, n).map_err(|e| Failure::Exit(EXIT_USAGE, e.to_string()))?;
    Ok((format!("{family}_{n}"), system))
}

fn execute(args: &Args, out: &mut dyn Write) -> Result<i32, Failure> {
    let limits = args.limits().map_err(|m| Failure::Exit(EXIT_USAGE, m))?;
    let (name, system) = load(args)?;

    let mut reports = Vec::with_capacity(1 + args.compare.len());
    for (i, &backend) in std::iter::once(&args.backend).chain(&args.compare).enumerate() {
        let mut store = make_store(backend, system.len(), args.threshold).map_err(|e| Failure::Exit(EXIT_USAGE, e.to_string()))?;
        let result = dfs_reach(&system, store.as_mut(), limits).map_err(|e| Failure::Exit(EXIT_MODEL, e.to_string()))?;
        if i == 0 {
            if let Some(path) = &args.dump_store {
                let mut file = io::BufWriter::new(std::fs::File::create(path)?);
                writeln!(file, "local states")?;
                result.tables.dump(&system, &mut file)?;
                writeln!(file, "store {backend}")?;
                store.dump(&mut file)?;
                file.flush()?;
            }
        }
        reports.push(RunReport::new(&name, &system, backend, args.threshold, &result.report));
    }

    let agree = (!args.compare.is_empty()).then(|| {
        let completed: Vec<&RunReport> = reports.iter().filter(|r| r.termination == Termination::Completed).collect();
        completed.windows(2).all(|w| w[0].states == w[1].states)
    });

    match args.format {
        Format::Json => write_json(&reports, agree, out)?,
        Format::Csv => write_csv(&reports, out)?,
        Format::Text => write_text(&reports, agree, out)?,
    }

    if agree == Some(false) {
        return Err(Failure::Exit(EXIT_MISMATCH, "backends disagree on the number of states".into()));
    }
    Ok(match reports[0].termination {
        Termination::Completed => EXIT_OK,
        Termination::Timeout => EXIT_TIMEOUT,
        Termination::StateCap => EXIT_STATE_CAP,
        Termination::MemoryCap => EXIT_MEMORY_CAP,
    })
}
