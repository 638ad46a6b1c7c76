//! `privcheck` command-line frontend.
//!
//! Exit codes: 0 satisfied (or all satisfied), 1 not satisfied (or any
//! failure in a suite or oracle run), 2 usage, input or model error.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use privcheck_core::checker::{check, check_suite};
use privcheck_core::io::{
    export_dot, load_model, load_records, save_model, trace_to_json, trace_to_text, IoError,
};
use privcheck_core::model::{Network, ModelError};
use privcheck_core::oracle::triple_oracle;
use privcheck_core::query::{bind, parse_query, QueryAst};
use privcheck_core::scenario;
use privcheck_core::semantics::{initial_config, simulate, step_choices, take_choice, SemanticsError, Trace};
use privcheck_core::synthesis::{
    shared_triples, synthesize_triples, BehavioralOptions, SymbolMapping, SynthesisError, SynthesisOptions,
};

pub const EXIT_SATISFIED: i32 = 0;
pub const EXIT_NOT_SATISFIED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Default directory for written artifacts when no explicit path is given.
pub const OUT_DIR_ENV: &str = "PRIVCHECK_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "privcheck", version, about = "Synthesize and verify personal privacy-disclosure models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a user's network from disclosure records and save it.
    Build(BuildArgs),
    /// Check one query against a model.
    Check(CheckArgs),
    /// Check a file of queries, one per line (`#` starts a comment).
    Suite(SuiteArgs),
    /// Seeded random run, or an interactive stepping session.
    Simulate(SimulateArgs),
    /// Write one DOT graph per process.
    Export(ExportArgs),
    /// Compare all 48 triple reachability verdicts with the records.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub user: String,
    /// Output model file; defaults to `user_<id>.model` in the output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
    /// Omit the three observer processes.
    #[arg(long)]
    pub without_observers: bool,
    /// Mark intermediate behavioral locations urgent.
    #[arg(long)]
    pub urgent_intermediates: bool,
    /// Add the weekday select/guard and the online-sharing quota.
    #[arg(long)]
    pub guarded: bool,
    /// Select range for `day`, as `LO,HI` (with `--guarded`).
    #[arg(long, value_parser = parse_range, default_value = "1,7", requires = "guarded")]
    pub day_range: (i64, i64),
    /// Add the quota escape edge back to `Idle` (with `--guarded`).
    #[arg(long, requires = "guarded")]
    pub repair: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceOutput {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub query: String,
    /// Print the witness or counterexample, if any.
    #[arg(long, value_enum)]
    pub trace: Option<TraceOutput>,
    /// Also print state and transition counts.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub queries: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 0, conflicts_with = "interactive")]
    pub seed: u64,
    #[arg(long, default_value_t = 20, conflicts_with = "interactive")]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "text", conflicts_with = "interactive")]
    pub format: TraceOutput,
    /// Read `list`, `take <i>`, `reset`, `quit` commands from standard input.
    #[arg(long)]
    pub interactive: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Directory for the DOT files; defaults to the output directory.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub records: PathBuf,
    #[arg(long)]
    pub user: String,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo},{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug)]
pub enum CliError {
    Io(IoError),
    Synthesis(SynthesisError),
    Semantics(SemanticsError),
    Query(String),
    Output(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Synthesis(e) => write!(f, "{e}"),
            CliError::Semantics(e) => write!(f, "{e}"),
            CliError::Query(e) => f.write_str(e),
            CliError::Output(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Io(e)
    }
}

impl From<SynthesisError> for CliError {
    fn from(e: SynthesisError) -> Self {
        CliError::Synthesis(e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Synthesis(SynthesisError::Model(e))
    }
}

impl From<SemanticsError> for CliError {
    fn from(e: SemanticsError) -> Self {
        CliError::Semantics(e)
    }
}

impl From<privcheck_core::checker::CheckError> for CliError {
    fn from(e: privcheck_core::checker::CheckError) -> Self {
        match e {
            privcheck_core::checker::CheckError::Semantics(s) => CliError::Semantics(s),
            other => CliError::Query(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_SATISFIED };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Build(a) => build(&a, out),
        Command::Check(a) => check_one(&a, out),
        Command::Suite(a) => suite(&a, out),
        Command::Simulate(a) if a.interactive => {
            let net = load_model(&a.model)?;
            interactive_step_loop(&net, input, out)?;
            Ok(EXIT_SATISFIED)
        }
        Command::Simulate(a) => simulate_run(&a, out),
        Command::Export(a) => export(&a, out),
        Command::Oracle(a) => oracle(&a, out),
    }
}

fn verdict_code(satisfied: bool) -> i32 {
    if satisfied {
        EXIT_SATISFIED
    } else {
        EXIT_NOT_SATISFIED
    }
}

fn build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = load_records(&a.records)?;
    let mapping = SymbolMapping::standard();
    let shared = shared_triples(&records, &a.user)?;
    let opts = SynthesisOptions {
        behavioral: BehavioralOptions { urgent_intermediates: a.urgent_intermediates },
        without_observers: a.without_observers,
    };
    let syn = synthesize_triples(&shared, &mapping, &opts)?;
    let mut network = syn.network;
    if a.guarded {
        network = scenario::apply_guards(&network, a.day_range)?;
        if a.repair {
            network = scenario::repair(&network)?;
        }
    }
    let path = a.out.clone().unwrap_or_else(|| a.out_dir.join(format!("user_{}.model", a.user)));
    save_model(&network, &path)?;
    writeln!(out, "user {}: {} shared triple(s)", a.user, shared.len())?;
    writeln!(out, "regex: {}", syn.regex)?;
    writeln!(out, "minimal DFA: {} state(s)", syn.dfa.num_states())?;
    writeln!(out, "processes: {}", network.processes().iter().map(|p| p.name()).collect::<Vec<_>>().join(" || "))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(EXIT_SATISFIED)
}

fn parse_bound(text: &str, network: &Network) -> Result<privcheck_core::query::BoundQuery, CliError> {
    let ast = parse_query(text).map_err(|e| CliError::Query(format!("query `{text}`: {e}")))?;
    bind(&ast, network).map_err(|e| CliError::Query(format!("query `{text}`: {e}")))
}

fn check_one(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let net = load_model(&a.model)?;
    let q = parse_bound(&a.query, &net)?;
    let v = check(&net, &q)?;
    writeln!(out, "{}", v.label())?;
    if a.stats {
        writeln!(out, "states explored: {}, transitions: {}", v.stats.states_explored, v.stats.transitions)?;
    }
    if let (Some(format), Some(trace)) = (a.trace, &v.trace) {
        write_trace_to(out, trace, &net, format)?;
    }
    Ok(verdict_code(v.satisfied))
}

fn write_trace_to(out: &mut dyn Write, trace: &Trace, net: &Network, format: TraceOutput) -> std::io::Result<()> {
    match format {
        TraceOutput::Text => out.write_all(trace_to_text(trace, net).as_bytes()),
        TraceOutput::Json => out.write_all(trace_to_json(trace, net).as_bytes()),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub fn read_suite(path: &Path) -> Result<Vec<(usize, QueryAst)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(IoError::File { path: path.to_path_buf(), message: e.to_string() }))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split_once('#').map_or(line, |(q, _)| q).trim();
        if body.is_empty() {
            continue;
        }
        let q = parse_query(body).map_err(|e| CliError::Query(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push((i + 1, q));
    }
    Ok(out)
}

fn suite(a: &SuiteArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let net = load_model(&a.model)?;
    let queries = read_suite(&a.queries)?;
    let asts: Vec<QueryAst> = queries.iter().map(|(_, q)| q.clone()).collect();
    let report = check_suite(&net, &asts).map_err(|e| match e {
        privcheck_core::checker::CheckError::Bind { index, source } => {
            CliError::Query(format!("{}:{}: {source}", a.queries.display(), queries[index].0))
        }
        other => other.into(),
    })?;
    writeln!(out, "{:<4} {:<14} query", "#", "verdict")?;
    for (i, (q, v)) in report.entries.iter().enumerate() {
        writeln!(out, "{:<4} {:<14} {q}", i + 1, v.label())?;
    }
    let passed = report.entries.iter().filter(|(_, v)| v.satisfied).count();
    writeln!(out, "{passed}/{} satisfied", report.entries.len())?;
    Ok(verdict_code(report.all_satisfied()))
}

fn simulate_run(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let net = load_model(&a.model)?;
    let sim = simulate(&net, a.seed, a.steps)?;
    write_trace_to(out, &sim.trace, &net, a.format)?;
    if a.format == TraceOutput::Text && sim.deadlocked {
        writeln!(out, "deadlock: no enabled transitions")?;
    }
    Ok(EXIT_SATISFIED)
}

/// Line-oriented stepping session.
///
/// Commands: `list`, `take <i>`, `reset`, `quit` (also `help`). The session
/// ends at `quit` or end of input.
pub fn interactive_step_loop(net: &Network, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let initial = initial_config(net);
    let mut current = initial.clone();
    let mut steps = 0usize;
    writeln!(out, "state: {}", current.describe(net))?;
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (None, ..) => continue,
            (Some("list" | "ls"), None, _) => {
                let choices = step_choices(net, &current)?;
                if choices.is_empty() {
                    writeln!(out, "no enabled transitions")?;
                }
                for c in choices {
                    writeln!(out, "[{}] {}", c.index, c.label)?;
                }
            }
            (Some("take" | "t"), Some(arg), None) => match arg.parse::<usize>() {
                Err(_) => writeln!(out, "invalid choice `{arg}`")?,
                Ok(i) => match take_choice(net, &current, i) {
                    Ok(c) => {
                        current = c.target;
                        steps += 1;
                        writeln!(out, "step {steps}: {}", c.label)?;
                        writeln!(out, "state: {}", current.describe(net))?;
                    }
                    Err(SemanticsError::ChoiceOutOfRange { available: 0, .. }) => {
                        writeln!(out, "no enabled transitions")?
                    }
                    Err(SemanticsError::ChoiceOutOfRange { index, available }) => {
                        writeln!(out, "invalid choice {index} ({available} available)")?
                    }
                    Err(e) => return Err(e.into()),
                },
            },
            (Some("reset"), None, _) => {
                current = initial.clone();
                steps = 0;
                writeln!(out, "state: {}", current.describe(net))?;
            }
            (Some("quit" | "exit" | "q"), None, _) => break,
            (Some("help"), None, _) => writeln!(out, "commands: list, take <i>, reset, quit")?,
            _ => writeln!(out, "unknown command `{}` (commands: list, take <i>, reset, quit)", line.trim())?,
        }
    }
    Ok(())
}

fn export(a: &ExportArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let net = load_model(&a.model)?;
    let dir = a.dot.clone().unwrap_or_else(|| a.out_dir.clone());
    for path in export_dot(&net, &dir)? {
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(EXIT_SATISFIED)
}

fn oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = load_records(&a.records)?;
    let shared = shared_triples(&records, &a.user)?;
    let net = synthesize_triples(&shared, &SymbolMapping::standard(), &SynthesisOptions::default())?.network;
    let report = triple_oracle(&net, &shared)?;
    for row in report.mismatches() {
        writeln!(out, "MISMATCH {}: expected {}, got {}", row.triple, row.expected, row.actual)?;
    }
    let agree = report.rows.len() - report.mismatches().count();
    writeln!(out, "user {}: {agree}/{} triples agree ({} shared)", a.user, report.rows.len(), shared.len())?;
    Ok(verdict_code(report.is_clean()))
}
