//! `cqunify`: batch and interactive front end.
//!
//! With a verb on the command line one command runs and the process exits
//! with its code. `--script FILE` runs one command per line. Without either,
//! commands are read from standard input.

mod commands;

use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cqunify::Signature;

use commands::{parse_signature, CliError, Session, VERBS};

#[derive(Parser, Debug)]
#[command(
    name = "cqunify",
    version,
    about = "Unification of positive conjunctive queries"
)]
struct Cli {
    /// Print results as JSON, one object per command.
    #[arg(long)]
    json: bool,
    /// Run the commands in FILE, one per line.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Declared signature, e.g. "a/0, f/2; p/1" (predicates after the semicolon).
    #[arg(long, value_name = "SIG")]
    sig: Option<String>,
    /// Add unknown symbols to the declared signature instead of rejecting them.
    #[arg(long)]
    infer_sig: bool,
    /// Print the rewrite steps of `solve`.
    #[arg(long)]
    trace: bool,
    /// Herbrand depth for the oracle when there are function symbols.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Number of fresh constants the oracle adds to the universe.
    #[arg(long)]
    fresh_constants: Option<usize>,
    /// Cap on the solutions the oracle examines.
    #[arg(long, default_value_t = 1 << 20)]
    max_interps: usize,
    /// Seed for randomized checks. All verbs are currently deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// VERB ARGS...
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    command: Vec<String>,
}

struct Front {
    session: Session,
    json: bool,
    trace: bool,
}

impl Front {
    /// Runs one command and prints its result. Returns the exit code.
    fn exec(&mut self, words: &[String]) -> i32 {
        match self.session.run(words) {
            Ok(out) => {
                let mut stdout = io::stdout().lock();
                if self.json {
                    let mut json = out.json;
                    if self.trace && !out.trace.is_empty() {
                        json["trace"] = serde_json::json!(out.trace);
                    }
                    let _ = writeln!(stdout, "{json}");
                } else {
                    if self.trace {
                        for line in &out.trace {
                            let _ = writeln!(stdout, "{line}");
                        }
                    }
                    let _ = writeln!(stdout, "{}", out.text);
                }
                0
            }
            Err(e) => {
                report(&e, self.json);
                e.exit_code()
            }
        }
    }

    /// Runs a line of a script or of the interactive loop. `None` on `:quit`.
    fn line(&mut self, line: &str) -> Option<i32> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Some(0);
        }
        if let Some(rest) = line.strip_prefix(':') {
            return self.meta(rest.trim());
        }
        match shlex::split(line) {
            Some(words) => Some(self.exec(&words)),
            None => {
                let e = CliError::usage("unbalanced quotes");
                report(&e, self.json);
                Some(e.exit_code())
            }
        }
    }

    fn meta(&mut self, cmd: &str) -> Option<i32> {
        let (name, rest) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
        let rest = rest.trim();
        match (name, rest) {
            ("quit" | "q", _) => return None,
            ("trace", "on") => self.trace = true,
            ("trace", "off") => self.trace = false,
            ("sig", "") => match &self.session.sig {
                Some(sig) => println!("{sig}"),
                None => println!("inferred from each command"),
            },
            ("sig", text) => {
                let mut sig = self.session.sig.clone().unwrap_or_default();
                if let Err(e) = parse_signature(text, &mut sig) {
                    report(&e, self.json);
                    return Some(e.exit_code());
                }
                println!("{sig}");
                self.session.sig = Some(sig);
            }
            ("help", _) => {
                for (verb, shape) in VERBS {
                    println!("{verb} {shape}");
                }
                println!(":trace on|off\n:sig [SIG]\n:quit");
            }
            _ => {
                let e = CliError::usage(format!("unknown command :{cmd}"));
                report(&e, self.json);
                return Some(e.exit_code());
            }
        }
        Some(0)
    }
}

fn report(e: &CliError, json: bool) {
    if json {
        eprintln!(
            "{}",
            serde_json::json!({ "error": { "code": e.code(), "message": e.message() } })
        );
    } else {
        eprintln!("error[{}]: {}", e.code(), e.message());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let sig = match &cli.sig {
        Some(text) => {
            let mut sig = Signature::new();
            if let Err(e) = parse_signature(text, &mut sig) {
                report(&e, cli.json);
                return ExitCode::from(e.exit_code() as u8);
            }
            Some(sig)
        }
        None => None,
    };
    let mut session = Session::new(sig, cli.infer_sig);
    session.oracle.depth = cli.depth;
    session.oracle.fresh_constants = cli.fresh_constants;
    session.oracle.max_interps = cli.max_interps;
    let mut front = Front {
        session,
        json: cli.json,
        trace: cli.trace,
    };

    if let Some(path) = &cli.script {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error[io]: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        };
        let mut worst = 0;
        for line in text.lines() {
            match front.line(line) {
                Some(code) => worst = worst.max(code),
                None => break,
            }
        }
        return ExitCode::from(worst as u8);
    }

    if !cli.command.is_empty() {
        return ExitCode::from(front.exec(&cli.command) as u8);
    }

    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("> ");
            let _ = io::stdout().flush();
        }
        let Some(Ok(line)) = lines.next() else { break };
        if front.line(&line).is_none() {
            break;
        }
    }
    ExitCode::SUCCESS
}
