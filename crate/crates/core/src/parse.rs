//! Text syntax.
//!
//! ```text
//! formula  := iff
//! iff      := imp ("<->" imp)*
//! imp      := or ("->" imp)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | ("exists" | "forall") VAR+ "." formula | primary
//! primary  := "(" formula ")" | "true" | "false" | term "=" term | pred ["(" terms ")"]
//! term     := VAR | sym ["(" terms ")"]
//! subst    := "bottom" | "{" [VAR "->" term ("," VAR "->" term)*] "}"
//! ```
//!
//! A quantifier body extends as far right as possible.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{Formula, Query};
use crate::subst::Substitution;
use crate::term::{Atom, Term};
use crate::var::Var;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {position}: expected {expected}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Sym(String),
    Exists,
    Forall,
    True,
    False,
    Bottom,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Eq,
    And,
    Or,
    Not,
    Arrow,
    Iff,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(s) | Tok::Sym(s) => s.clone(),
        Tok::Exists => "exists".into(),
        Tok::Forall => "forall".into(),
        Tok::True => "true".into(),
        Tok::False => "false".into(),
        Tok::Bottom => "bottom".into(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::LBrace => "{".into(),
        Tok::RBrace => "}".into(),
        Tok::Comma => ",".into(),
        Tok::Dot => ".".into(),
        Tok::Eq => "=".into(),
        Tok::And => "&".into(),
        Tok::Or => "|".into(),
        Tok::Not => "~".into(),
        Tok::Arrow => "->".into(),
        Tok::Iff => "<->".into(),
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b',' => Some(Tok::Comma),
            b'.' => Some(Tok::Dot),
            b'=' => Some(Tok::Eq),
            b'&' => Some(Tok::And),
            b'|' => Some(Tok::Or),
            b'~' => Some(Tok::Not),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, start));
            i += 1;
            continue;
        }
        if input[i..].starts_with("->") {
            out.push((Tok::Arrow, start));
            i += 2;
            continue;
        }
        if input[i..].starts_with("<->") {
            out.push((Tok::Iff, start));
            i += 3;
            continue;
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &input[start..i];
            let tok = match word {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "true" => Tok::True,
                "false" => Tok::False,
                "bottom" => Tok::Bottom,
                _ if Var::is_valid_name(word) => Tok::Var(word.to_string()),
                _ => Tok::Sym(word.to_string()),
            };
            out.push((tok, start));
            continue;
        }
        return Err(SyntaxError {
            position: start,
            expected: "a token".into(),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            end: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn error<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        let expected = match self.peek() {
            Some(t) => format!("{expected}, found '{}'", describe(t)),
            None => format!("{expected}, found end of input"),
        };
        Err(SyntaxError {
            position: self.offset(),
            expected,
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(&format!("'{}'", describe(t)))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.implication()?;
        while self.eat(&Tok::Iff) {
            let g = self.implication()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let f = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let g = self.implication()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let mut vars = Vec::new();
                while let Some(Tok::Var(v)) = self.peek() {
                    vars.push(Var::new(v));
                    self.pos += 1;
                    self.eat(&Tok::Comma);
                }
                if vars.is_empty() {
                    return self.error("a variable");
                }
                self.expect(&Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall_all(&vars, body)
                } else {
                    Formula::exists_all(&vars, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Var(_)) => {
                let s = self.term()?;
                self.expect(&Tok::Eq)?;
                let t = self.term()?;
                Ok(Formula::Eq(s, t))
            }
            Some(Tok::Sym(_)) => {
                let s = self.term()?;
                if self.eat(&Tok::Eq) {
                    let t = self.term()?;
                    return Ok(Formula::Eq(s, t));
                }
                match s {
                    Term::App(p, args) => Ok(Formula::Atom(Atom { pred: p, args })),
                    Term::Var(_) => unreachable!("symbol token parsed as variable"),
                }
            }
            _ => self.error("a formula"),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::var(v))
            }
            Some(Tok::Sym(f)) => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        self.expect(&Tok::RParen)?;
                        break;
                    }
                }
                Ok(Term::app(f, args))
            }
            _ => self.error("a term"),
        }
    }

    fn substitution(&mut self) -> Result<Substitution, SyntaxError> {
        if self.eat(&Tok::Bottom) {
            return Ok(Substitution::Bottom);
        }
        self.expect(&Tok::LBrace)?;
        let mut map = BTreeMap::new();
        if self.eat(&Tok::RBrace) {
            return Ok(Substitution::Bindings(map));
        }
        loop {
            let at = self.offset();
            let x = match self.peek() {
                Some(Tok::Var(v)) => Var::new(v),
                _ => return self.error("a variable"),
            };
            self.pos += 1;
            self.expect(&Tok::Arrow)?;
            let t = self.term()?;
            if map.insert(x, t).is_some() {
                return Err(SyntaxError {
                    position: at,
                    expected: "a variable not bound earlier".into(),
                });
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RBrace)?;
            break;
        }
        Ok(Substitution::Bindings(map))
    }

    fn var_set(&mut self) -> Result<BTreeSet<Var>, SyntaxError> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = BTreeSet::new();
        while let Some(Tok::Var(v)) = self.peek() {
            out.insert(Var::new(v));
            self.pos += 1;
            self.eat(&Tok::Comma);
        }
        if braced {
            self.expect(&Tok::RBrace)?;
        }
        Ok(out)
    }
}

pub fn parse_term(input: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(input)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(input: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(input)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a formula and requires it to be a positive conjunctive query.
pub fn parse_query(input: &str) -> Result<Query, SyntaxError> {
    let f = parse_formula(input)?;
    Query::new(f).map_err(|e| SyntaxError {
        position: 0,
        expected: format!("a query ({} is not allowed)", e.0),
    })
}

pub fn parse_substitution(input: &str) -> Result<Substitution, SyntaxError> {
    let mut p = Parser::new(input)?;
    let s = p.substitution()?;
    p.finish()?;
    Ok(s)
}

/// A set of variables: `X, Y`, `X Y` or `{X, Y}`.
pub fn parse_var_set(input: &str) -> Result<BTreeSet<Var>, SyntaxError> {
    let mut p = Parser::new(input)?;
    let s = p.var_set()?;
    p.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_example() {
        assert_eq!(
            parse_term("f(X, a)").unwrap(),
            Term::app("f", vec![Term::var("X"), Term::constant("a")])
        );
    }

    #[test]
    fn query_example() {
        let f = parse_formula("exists Z . X = f(Z) & p(X)").unwrap();
        let want = Formula::exists(
            Var::new("Z"),
            Formula::and(
                Formula::Eq(Term::var("X"), Term::app("f", vec![Term::var("Z")])),
                Formula::atom("p", vec![Term::var("X")]),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn unbalanced_is_error() {
        let e = parse_formula("X = f(X").unwrap_err();
        assert_eq!(e.position, 7);
        assert!(e.expected.starts_with("')'"), "{}", e.expected);
    }

    #[test]
    fn precedence() {
        let f = parse_formula("p | q & r -> s <-> t").unwrap();
        let want = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::atom("p", vec![]),
                    Formula::and(Formula::atom("q", vec![]), Formula::atom("r", vec![])),
                ),
                Formula::atom("s", vec![]),
            ),
            Formula::atom("t", vec![]),
        );
        assert_eq!(f, want);
        let f = parse_formula("p -> q -> r").unwrap();
        assert!(matches!(f, Formula::Implies(_, ref b) if matches!(**b, Formula::Implies(..))));
    }

    #[test]
    fn quantifier_extends_right() {
        let f = parse_formula("p(X) & exists Y Z . q(Y) | r(Z)").unwrap();
        match f {
            Formula::And(_, b) => match *b {
                Formula::Exists(_, inner) => assert!(matches!(*inner, Formula::Exists(_, _))),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
        let g = parse_formula("(exists Y . q(Y)) & p(X)").unwrap();
        assert!(matches!(g, Formula::And(..)));
    }

    #[test]
    fn substitutions() {
        let s = parse_substitution("{X -> f(Y), Z -> a}").unwrap();
        assert_eq!(s.to_string(), "{X -> f(Y), Z -> a}");
        assert_eq!(parse_substitution("bottom").unwrap(), Substitution::Bottom);
        assert_eq!(parse_substitution("{}").unwrap(), Substitution::empty());
        assert!(parse_substitution("{X -> a, X -> b}").is_err());
    }

    #[test]
    fn query_rejects_negation() {
        assert!(parse_query("~p(X)").is_err());
        assert!(parse_query("exists X . p(X) & true").is_ok());
    }

    #[test]
    fn var_sets() {
        let s = parse_var_set("{X, Y}").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(parse_var_set("X Z").unwrap().len(), 2);
        assert!(parse_var_set("").unwrap().is_empty());
    }

    #[test]
    fn bad_tokens() {
        assert!(parse_formula("p(X) $ q").is_err());
        assert!(parse_formula("X").is_err());
        assert!(parse_formula("exists . p").is_err());
        assert!(parse_term("f(X) g").is_err());
    }
}
