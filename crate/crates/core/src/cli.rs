//! Command-line front end. Every command returns its output and exit code
//! instead of printing, so the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use crate::compile::compile;
use crate::fractran::{factorize, parse_program, primegame, FractranProgram, Outcome};
use crate::stream::{collatz_spec, induce_spec, probe_productivity, StreamError, StreamSpec};
use crate::turing::{flipper_tm, parse_tm, UnaryTM};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

pub const DEFAULT_RUN_FUEL: u64 = 10_000;
pub const DEFAULT_PRIMES_FUEL: u64 = 10_000_000;
pub const DEFAULT_PROBE_FUEL: u64 = 1_000_000;
pub const DEFAULT_PROBE_COUNT: u64 = 10;

#[derive(Debug, Parser)]
#[command(name = "fractran", version, about = "Fractran, unary Turing machines and lazy streams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Step budget (per element for `probe`).
    #[arg(long, global = true)]
    pub fuel: Option<u64>,
    /// Number of primes or stream elements.
    #[arg(long, global = true)]
    pub count: Option<u64>,
    /// Also print each value as a prime factorization.
    #[arg(long, global = true)]
    pub factored: bool,
    /// Remove self-loops before compiling.
    #[arg(long, global = true)]
    pub normalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program from n0 and print the trace.
    Run { program: String, n0: String },
    /// Print the exponents of the powers of two reached by PRIMEGAME from 2.
    Primes,
    /// Compile a two-symbol Turing machine to an annotated Fractran program.
    CompileTm { machine: String },
    /// Print the stream specification of a program as a TRS.
    Translate { program: String },
    /// Evaluate the first elements of a program's stream.
    Probe { program: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn fail(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        stderr.push('\n');
        Output { stdout: String::new(), stderr, code }
    }
}

pub fn execute(cli: &Cli) -> Output {
    if cli.fuel == Some(0) {
        return Output::fail(EXIT_PRECONDITION, "error: --fuel must be at least 1");
    }
    match &cli.command {
        Command::Run { program, n0 } => {
            cmd_run(program, n0, cli.fuel.unwrap_or(DEFAULT_RUN_FUEL), cli.factored)
        }
        Command::Primes => cmd_primes(cli.count.unwrap_or(5), cli.fuel.unwrap_or(DEFAULT_PRIMES_FUEL)),
        Command::CompileTm { machine } => cmd_compile_tm(machine, cli.normalize),
        Command::Translate { program } => cmd_translate(program),
        Command::Probe { program } => cmd_probe(
            program,
            cli.count.unwrap_or(DEFAULT_PROBE_COUNT),
            cli.fuel.unwrap_or(DEFAULT_PROBE_FUEL),
        ),
    }
}

/// A source names an existing file, a builtin alias, or is the text itself.
fn read_source(source: &str) -> Result<String, Output> {
    let path = Path::new(source);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| Output::fail(EXIT_PARSE, format!("error: cannot read {}: {}", source, e)))
    } else {
        Ok(source.to_string())
    }
}

fn load_program(source: &str) -> Result<FractranProgram, Output> {
    if source.eq_ignore_ascii_case("primegame") {
        return Ok(primegame());
    }
    let text = read_source(source)?;
    parse_program(&text).map_err(|e| Output::fail(EXIT_PARSE, format!("error: {}", e)))
}

fn load_spec(source: &str) -> Result<StreamSpec, Output> {
    if source.eq_ignore_ascii_case("collatz") {
        return Ok(collatz_spec());
    }
    load_program(source).map(|p| induce_spec(&p))
}

fn load_machine(source: &str) -> Result<UnaryTM, Output> {
    if source.eq_ignore_ascii_case("flipper") {
        return Ok(flipper_tm());
    }
    let text = read_source(source)?;
    parse_tm(&text).map_err(|e| Output::fail(EXIT_PARSE, format!("error: {}", e)))
}

fn stream_failure(e: StreamError) -> Output {
    Output::fail(EXIT_PRECONDITION, format!("error: {}", e))
}

pub fn cmd_run(program: &str, n0: &str, fuel: u64, factored: bool) -> Output {
    let p = match load_program(program) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let n0: BigUint = match n0.trim().parse() {
        Ok(n) if n != BigUint::from(0u32) => n,
        _ => return Output::fail(EXIT_PARSE, format!("error: start value must be a positive integer, got `{}`", n0)),
    };
    let trace = p.run(&n0, fuel);
    let mut out = String::new();
    for (i, v) in trace.values.iter().enumerate() {
        if factored {
            let f = factorize(v).map(|e| e.factored_string()).unwrap_or_else(|_| "?".into());
            writeln!(out, "{} {} {}", i, f, v).unwrap();
        } else {
            writeln!(out, "{} {}", i, v).unwrap();
        }
    }
    match trace.outcome {
        Outcome::Halted(_) => Output::ok(out),
        Outcome::FuelExhausted(k) => Output {
            stdout: out,
            stderr: format!("fuel exhausted after {} steps\n", k),
            code: EXIT_EXHAUSTED,
        },
    }
}

pub fn cmd_primes(count: u64, fuel: u64) -> Output {
    let found = primegame().powers_of_two_exponents_until(&BigUint::from(2u32), fuel, count as usize);
    let mut out = String::new();
    for e in &found {
        writeln!(out, "{}", e).unwrap();
    }
    if (found.len() as u64) < count {
        return Output {
            stdout: out,
            stderr: format!("fuel exhausted after {} of {} primes\n", found.len(), count),
            code: EXIT_EXHAUSTED,
        };
    }
    Output::ok(out)
}

pub fn cmd_compile_tm(machine: &str, normalize: bool) -> Output {
    let mut tm = match load_machine(machine) {
        Ok(tm) => tm,
        Err(o) => return o,
    };
    if normalize {
        tm = tm.normalize_no_self_loops();
    }
    match compile(&tm) {
        Ok(c) => Output::ok(c.listing()),
        Err(e) => Output::fail(EXIT_PRECONDITION, format!("error: {}", e)),
    }
}

pub fn cmd_translate(program: &str) -> Output {
    let spec = match load_spec(program) {
        Ok(s) => s,
        Err(o) => return o,
    };
    match spec.emit_trs() {
        Ok(text) => Output::ok(text),
        Err(e) => stream_failure(e),
    }
}

pub fn cmd_probe(program: &str, count: u64, fuel: u64) -> Output {
    let spec = match load_spec(program) {
        Ok(s) => s,
        Err(o) => return o,
    };
    match probe_productivity(&spec, count, fuel) {
        Ok(report) => Output {
            stdout: report.to_string(),
            stderr: String::new(),
            code: if report.all_produced() { EXIT_OK } else { EXIT_EXHAUSTED },
        },
        Err(e) => stream_failure(e),
    }
}
