//! Verb dispatch. Every verb takes its arguments as text in the external
//! syntax and produces one result in text and JSON form.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::{json, Value};

use cqunify::oracle::{self, OracleOptions, Report, Side, Verdict, Witness};
use cqunify::solver::query_diff;
use cqunify::{
    diff_set, join_all, kernel_e, meet_all, parse_formula, parse_query, parse_substitution,
    parse_term, parse_var_set, project, solve, solved_form, to_eformula, to_substitution, EFormula,
    Formula, LatticeError, Query, Signature, SignatureError, SubstError, Substitution, SyntaxError,
    Term, Var,
};

pub const VERBS: &[(&str, &str)] = &[
    ("solve", "QUERY"),
    ("equiv", "QUERY QUERY"),
    ("leq", "QUERY QUERY"),
    ("meet", "EFORMULA EFORMULA..."),
    ("join", "EFORMULA EFORMULA..."),
    ("project", "EFORMULA VARS"),
    ("kernel", "EFORMULA|SUBST"),
    ("gamma", "EFORMULA"),
    ("ungamma", "SUBST"),
    ("apply", "SUBST FORMULA|TERM"),
    ("compose", "SUBST SUBST"),
    ("restrict", "SUBST VARS"),
    ("regext", "SUBST VARS"),
    ("diff", "TERM TERM | QUERY QUERY"),
    ("oracle", "leq|equiv QUERY QUERY"),
    ("generalize", "EFORMULA [SIZE]"),
];

#[derive(Debug)]
pub enum CliError {
    /// Bad input text, unknown symbols, unknown verbs, wrong arity: exit 2.
    Syntax { code: &'static str, message: String },
    /// Well-formed input the operation rejects: exit 1.
    Domain { code: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Syntax { code, .. } | CliError::Domain { code, .. } => code,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Syntax { message, .. } | CliError::Domain { message, .. } => message,
        }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::Syntax {
            code: "usage",
            message: message.into(),
        }
    }

    fn domain(code: &'static str, message: impl ToString) -> CliError {
        CliError::Domain {
            code,
            message: message.to_string(),
        }
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> CliError {
        CliError::Syntax {
            code: "syntax",
            message: e.to_string(),
        }
    }
}

impl From<SignatureError> for CliError {
    fn from(e: SignatureError) -> CliError {
        CliError::Syntax {
            code: "signature",
            message: e.to_string(),
        }
    }
}

impl From<SubstError> for CliError {
    fn from(e: SubstError) -> CliError {
        let code = match e {
            SubstError::NotApplicable { .. } | SubstError::Bottom => "not-applicable",
            SubstError::DomainOverlap(_) => "domain-overlap",
        };
        CliError::domain(code, e)
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> CliError {
        match e {
            LatticeError::Syntax(s) => s.into(),
            LatticeError::HasAtoms(_) => CliError::domain("not-an-eformula", e),
            LatticeError::EmptySet => CliError::domain("empty-set", e),
            LatticeError::Inconsistent => CliError::domain("inconsistent", e),
        }
    }
}

impl From<oracle::OracleError> for CliError {
    fn from(e: oracle::OracleError) -> CliError {
        match e {
            oracle::OracleError::Signature(s) => s.into(),
            e => CliError::domain("oracle", e),
        }
    }
}

/// Result of one command.
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Rewrite steps, shown when tracing is on.
    pub trace: Vec<String>,
}

impl Output {
    fn new(verb: &str, inputs: &[String], text: String, result: Value) -> Output {
        Output {
            text,
            json: json!({ "verb": verb, "inputs": inputs, "result": result }),
            trace: Vec::new(),
        }
    }

    fn plain(verb: &str, inputs: &[String], text: String) -> Output {
        Output::new(verb, inputs, text.clone(), Value::String(text))
    }
}

/// Session state: the signature and the oracle settings.
pub struct Session {
    /// Declared signature; `None` means symbols are inferred from the input.
    pub sig: Option<Signature>,
    /// Extend a declared signature with unknown symbols instead of rejecting them.
    pub infer: bool,
    pub oracle: OracleOptions,
}

impl Session {
    pub fn new(sig: Option<Signature>, infer: bool) -> Session {
        Session {
            sig,
            infer,
            oracle: OracleOptions::default(),
        }
    }

    /// Signature check applied to every parsed argument.
    fn admit(&mut self, f: &Formula) -> Result<(), CliError> {
        match &mut self.sig {
            None => Ok(()),
            Some(sig) if self.infer => Ok(sig.extend_from_formula(f)?),
            Some(sig) => Ok(sig.check_formula(f)?),
        }
    }

    fn admit_term(&mut self, t: &Term) -> Result<(), CliError> {
        self.admit(&Formula::Eq(t.clone(), t.clone()))
    }

    fn query(&mut self, s: &str) -> Result<Query, CliError> {
        let q = parse_query(s)?;
        self.admit(q.formula())?;
        Ok(q)
    }

    fn eformula(&mut self, s: &str) -> Result<EFormula, CliError> {
        Ok(EFormula::new(self.query(s)?)?)
    }

    fn subst(&mut self, s: &str) -> Result<Substitution, CliError> {
        let sigma = parse_substitution(s)?;
        if let Ok(m) = sigma.bindings() {
            for t in m.values() {
                self.admit_term(t)?;
            }
        }
        Ok(sigma)
    }

    fn term(&mut self, s: &str) -> Result<Term, CliError> {
        let t = parse_term(s)?;
        self.admit_term(&t)?;
        Ok(t)
    }

    pub fn run(&mut self, words: &[String]) -> Result<Output, CliError> {
        let Some((verb, args)) = words.split_first() else {
            return Err(CliError::usage("missing verb"));
        };
        let Some((_, shape)) = VERBS.iter().find(|(v, _)| v == verb) else {
            return Err(CliError::usage(format!("unknown verb {verb}")));
        };
        let (min, max) = arity(verb);
        if args.len() < min || args.len() > max {
            return Err(CliError::usage(format!("usage: {verb} {shape}")));
        }
        let a = |i: usize| args[i].as_str();
        let out = match verb.as_str() {
            "solve" => {
                let q = self.query(a(0))?;
                let (s, trace) = solve(&q);
                let mut out = Output::plain(verb, args, s.to_string());
                out.trace = trace.steps.iter().map(ToString::to_string).collect();
                out
            }
            "equiv" | "leq" => {
                let q1 = self.query(a(0))?;
                let q2 = self.query(a(1))?;
                let b = if verb == "equiv" {
                    cqunify::equivalent(&q1, &q2)
                } else {
                    cqunify::more_general(&q1, &q2)
                };
                Output::new(verb, args, b.to_string(), Value::Bool(b))
            }
            "meet" | "join" => {
                let es = args
                    .iter()
                    .map(|s| self.eformula(s))
                    .collect::<Result<Vec<_>, _>>()?;
                let e = if verb == "meet" {
                    meet_all(&es)?
                } else {
                    join_all(&es)?
                };
                Output::plain(verb, args, e.to_string())
            }
            "project" => {
                let e = self.eformula(a(0))?;
                let xs = parse_var_set(a(1))?;
                let p = project(&e, &xs).solve().canonicalize();
                Output::plain(verb, args, EFormula::from_solved(&p)?.to_string())
            }
            "kernel" => {
                let k = if a(0).trim_start().starts_with('{') || a(0).trim() == "bottom" {
                    self.subst(a(0))?.kernel()?
                } else {
                    kernel_e(&self.eformula(a(0))?)?
                };
                Output::plain(verb, args, var_set(&k))
            }
            "gamma" => {
                let e = self.eformula(a(0))?;
                Output::plain(verb, args, to_substitution(&e).to_string())
            }
            "ungamma" => {
                let sigma = self.subst(a(0))?;
                Output::plain(verb, args, to_eformula(&sigma).to_string())
            }
            "apply" => {
                let sigma = self.subst(a(0))?;
                let text = match parse_formula(a(1)) {
                    Ok(f) => {
                        self.admit(&f)?;
                        sigma.apply_to_formula(&f)?.to_string()
                    }
                    Err(e) => match parse_term(a(1)) {
                        Ok(t) => {
                            self.admit_term(&t)?;
                            sigma.apply_to_term(&t)?.to_string()
                        }
                        Err(_) => return Err(e.into()),
                    },
                };
                Output::plain(verb, args, text)
            }
            "compose" => {
                let sigma = self.subst(a(0))?;
                let theta = self.subst(a(1))?;
                Output::plain(verb, args, sigma.compose(&theta)?.to_string())
            }
            "restrict" | "regext" => {
                let sigma = self.subst(a(0))?;
                let xs = parse_var_set(a(1))?;
                let r = if verb == "restrict" {
                    sigma.restrict(&xs)
                } else {
                    sigma.regular_extension(&xs)
                };
                Output::plain(verb, args, r.to_string())
            }
            "diff" => self.diff(args)?,
            "oracle" => self.oracle(args)?,
            "generalize" => {
                let e = self.eformula(a(0))?;
                let bound = match args.get(1) {
                    Some(s) => s
                        .parse()
                        .map_err(|_| CliError::usage("size bound must be a number"))?,
                    None => 16,
                };
                let all = oracle::enumerate_generalizations(&e, bound)?;
                let items: Vec<String> = all.iter().map(ToString::to_string).collect();
                Output::new(verb, args, items.join("\n"), json!(items))
            }
            _ => unreachable!("verb table checked above"),
        };
        Ok(out)
    }

    fn diff(&mut self, args: &[String]) -> Result<Output, CliError> {
        let terms = parse_term(&args[0]).is_ok() && parse_term(&args[1]).is_ok();
        let pairs = match terms {
            true => {
                let s = self.term(&args[0])?;
                let t = self.term(&args[1])?;
                diff_set(&s, &t)
            }
            _ => {
                let q1 = self.query(&args[0])?;
                let q2 = self.query(&args[1])?;
                query_diff(&solved_form(&q1), &solved_form(&q2))
                    .map_err(|e| CliError::domain("alignment", e))?
            }
        };
        let items: Vec<String> = pairs.iter().map(|(s, t)| format!("({s}, {t})")).collect();
        let result: Vec<Value> = pairs
            .iter()
            .map(|(s, t)| json!([s.to_string(), t.to_string()]))
            .collect();
        Ok(Output::new(
            "diff",
            args,
            format!("{{{}}}", items.join(", ")),
            json!(result),
        ))
    }

    fn oracle(&mut self, args: &[String]) -> Result<Output, CliError> {
        let mode = args[0].as_str();
        if mode != "leq" && mode != "equiv" {
            return Err(CliError::usage("usage: oracle leq|equiv QUERY QUERY"));
        }
        let q1 = self.query(&args[1])?;
        let q2 = self.query(&args[2])?;
        let mut opts = self.oracle.clone();
        if opts.signature.is_none() {
            if let Some(sig) = &self.sig {
                let mut sig = sig.clone();
                sig.ensure_constant();
                opts.signature = Some(sig);
            }
        }
        let start = Instant::now();
        let report = if mode == "leq" {
            oracle::check_leq(&q1, &q2, &opts)?
        } else {
            oracle::check_equiv(&q1, &q2, &opts)?
        };
        let elapsed = start.elapsed().as_millis() as u64;
        Ok(oracle_output(&report, elapsed))
    }
}

fn oracle_output(report: &Report, elapsed_ms: u64) -> Output {
    let mut json = json!({
        "verdict": report.verdict.label(),
        "enumerated_count": report.enumerated,
        "elapsed_ms": elapsed_ms,
    });
    if let Some(w) = report.verdict.witness() {
        json["witness"] = witness_json(w);
    }
    if report.verdict == Verdict::Refuted(None) {
        json["reason"] = json!("atom counts differ");
    }
    Output {
        text: report.verdict.to_string(),
        json,
        trace: Vec::new(),
    }
}

fn witness_json(w: &Witness) -> Value {
    let valuation: serde_json::Map<String, Value> = w
        .valuation
        .iter()
        .map(|(x, t)| (x.to_string(), Value::String(t.to_string())))
        .collect();
    let support: Vec<String> = w.support.iter().map(ToString::to_string).collect();
    json!({
        "valuation": valuation,
        "support": support,
        "solves": match w.solves {
            Side::Left => "left",
            Side::Right => "right",
        },
    })
}

fn var_set(xs: &BTreeSet<Var>) -> String {
    let names: Vec<&str> = xs.iter().map(Var::name).collect();
    format!("{{{}}}", names.join(", "))
}

fn arity(verb: &str) -> (usize, usize) {
    match verb {
        "solve" | "kernel" | "gamma" | "ungamma" => (1, 1),
        "meet" | "join" => (1, usize::MAX),
        "generalize" => (1, 2),
        "oracle" => (3, 3),
        _ => (2, 2),
    }
}

/// Parses `a/0, f/2; p/1`: function symbols before the semicolon, predicates
/// after it. The `functions:` and `predicates:` labels printed by `:sig` are
/// accepted too.
pub fn parse_signature(text: &str, into: &mut Signature) -> Result<(), CliError> {
    let (funs, preds) = text.split_once(';').unwrap_or((text, ""));
    let strip = |s: &str, label: &str| -> String {
        let s = s.trim();
        s.strip_prefix(label).unwrap_or(s).trim().to_string()
    };
    let entries = |s: String| -> Result<Vec<(String, usize)>, CliError> {
        s.split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .map(|e| {
                let (name, n) = e.split_once('/').unwrap_or((e, "0"));
                if !matches!(parse_term(name), Ok(Term::App(_, ref xs)) if xs.is_empty()) {
                    return Err(CliError::usage(format!("bad symbol name in {e}")));
                }
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad arity in {e}")))?;
                Ok((name.trim().to_string(), n))
            })
            .collect()
    };
    for (name, n) in entries(strip(funs, "functions:"))? {
        into.add_function(&name, n)?;
    }
    for (name, n) in entries(strip(preds, "predicates:"))? {
        into.add_predicate(&name, n)?;
    }
    Ok(())
}
