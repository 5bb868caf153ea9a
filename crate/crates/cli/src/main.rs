//! `jpa`: evaluate, trace and dump PCF programs compiled to j-pushdown automata.

mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jpa_core::machine::{compile, evaluate, interact, InteractOptions, JpaMachine, MachineError, OpponentPolicy};
use jpa_core::pcf::{denote_source, Desc, Ty};

#[derive(Parser)]
#[command(name = "jpa", version, about = "Game-semantic PCF evaluation on j-pushdown automata")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a closed program of type nat or bool.
    Eval {
        /// Source file, or `-` for stdin.
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Print the play with the tape and stack behind every P-move.
    Trace {
        file: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
        /// Opponent seed for programs of higher type.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Longest play printed for programs of higher type.
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the compiled machine.
    Dump { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Tags,
    Games,
    Machine,
    Pcf,
}

enum Failure {
    Input(String),
    Diverged,
    Internal(String),
}

impl From<MachineError> for Failure {
    fn from(e: MachineError) -> Failure {
        match e {
            MachineError::Diverged(_) => Failure::Diverged,
            MachineError::NotGround(t) => Failure::Input(format!("program type {t} is not nat or bool")),
            e => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Eval { file, max_steps } => cmd_eval(&file, max_steps),
        Cmd::Trace {
            file,
            max_steps,
            seed,
            depth,
        } => cmd_trace(&file, max_steps, seed, depth),
        Cmd::Verify {
            suite,
            depth,
            seeds,
            seed,
        } => verify::run(suite, depth, seeds, seed).map_err(Failure::Internal),
        Cmd::Dump { file } => cmd_dump(&file),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Diverged) => {
            println!("DIVERGED");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load(file: &PathBuf) -> Result<(Desc, Ty), Failure> {
    let mut src = String::new();
    let read = if file.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut src).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|s| src = s)
    };
    read.map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    if src.trim().is_empty() {
        return Err(Failure::Input(format!("{}: empty program", file.display())));
    }
    denote_source(&src).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))
}

fn machine(d: &Desc) -> Result<JpaMachine, Failure> {
    compile(d).map_err(|e| Failure::Internal(e.to_string()))
}

fn cmd_eval(file: &PathBuf, max_steps: usize) -> Result<(), Failure> {
    let (d, _) = load(file)?;
    let v = evaluate(&d, max_steps)?;
    println!("{v}");
    Ok(())
}

fn cmd_trace(file: &PathBuf, max_steps: usize, seed: u64, depth: usize) -> Result<(), Failure> {
    let (d, ty) = load(file)?;
    let m = machine(&d)?;
    let (mut o, max_len) = match ty {
        Ty::Nat => (OpponentPolicy::NumeralReader, None),
        Ty::Bool => (OpponentPolicy::BooleanReader, None),
        _ => (OpponentPolicy::random_legal(seed), Some(depth)),
    };
    let t = interact(
        &m,
        &mut o,
        &InteractOptions {
            budget: max_steps,
            snapshots: true,
            max_len,
        },
    )?;
    let trace = t.position.to_trace();
    let mut out = String::new();
    let mut snaps = t.snapshots.iter().peekable();
    for (i, line) in trace.lines().enumerate() {
        out.push_str(line);
        out.push('\n');
        if let Some(s) = snaps.next_if(|s| s.len == i) {
            out.push_str(&s.tape);
            out.push_str(&s.stack);
        }
    }
    if t.exhausted {
        out.push_str(&format!("TRUNCATED after {} steps\n", t.steps));
    }
    emit(&out);
    Ok(())
}

fn cmd_dump(file: &PathBuf) -> Result<(), Failure> {
    let (d, _) = load(file)?;
    emit(&machine(&d)?.to_string());
    Ok(())
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}
