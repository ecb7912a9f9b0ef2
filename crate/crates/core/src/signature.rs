use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::Formula;
use crate::term::{Sym, Term};

const RESERVED: [&str; 4] = ["=", "true", "false", "bottom"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown function symbol {0}")]
    UnknownFunction(String),
    #[error("unknown predicate symbol {0}")]
    UnknownPredicate(String),
    #[error("{symbol} has arity {expected} but is used with {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("{0} is used both as a function and as a predicate")]
    NameClash(String),
    #[error("{0} is reserved")]
    Reserved(String),
    #[error("signature has no constant")]
    NoConstant,
}

/// Function and predicate symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    functions: BTreeMap<Sym, usize>,
    predicates: BTreeMap<Sym, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Signature, SignatureError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Signature, SignatureError> {
        self.add_predicate(name, arity)?;
        Ok(self)
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        check_name(name)?;
        if self.predicates.contains_key(name) {
            return Err(SignatureError::NameClash(name.to_string()));
        }
        match self.functions.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            _ => {
                self.functions.insert(Arc::from(name), arity);
                Ok(())
            }
        }
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        check_name(name)?;
        if self.functions.contains_key(name) {
            return Err(SignatureError::NameClash(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityMismatch {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            _ => {
                self.predicates.insert(Arc::from(name), arity);
                Ok(())
            }
        }
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.functions.iter().map(|(k, v)| (k, *v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.predicates.iter().map(|(k, v)| (k, *v))
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn constants(&self) -> Vec<Sym> {
        self.functions
            .iter()
            .filter(|(_, a)| **a == 0)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn is_constants_only(&self) -> bool {
        self.functions.values().all(|a| *a == 0)
    }

    /// Checks the "at least one constant" requirement.
    pub fn validate(&self) -> Result<(), SignatureError> {
        if self.constants().is_empty() {
            return Err(SignatureError::NoConstant);
        }
        Ok(())
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                match self.functions.get(f) {
                    None => return Err(SignatureError::UnknownFunction(f.to_string())),
                    Some(&a) if a != args.len() => {
                        return Err(SignatureError::ArityMismatch {
                            symbol: f.to_string(),
                            expected: a,
                            found: args.len(),
                        })
                    }
                    _ => {}
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), SignatureError> {
        let mut result = Ok(());
        f.visit(&mut |g| {
            if result.is_err() {
                return;
            }
            result = match g {
                Formula::Eq(s, t) => self.check_term(s).and_then(|_| self.check_term(t)),
                Formula::Atom(a) => match self.predicates.get(&a.pred) {
                    None => Err(SignatureError::UnknownPredicate(a.pred.to_string())),
                    Some(&n) if n != a.args.len() => Err(SignatureError::ArityMismatch {
                        symbol: a.pred.to_string(),
                        expected: n,
                        found: a.args.len(),
                    }),
                    _ => a.args.iter().try_for_each(|t| self.check_term(t)),
                },
                _ => Ok(()),
            };
        });
        result
    }

    pub fn extend_from_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        if let Term::App(f, args) = t {
            self.add_function(f, args.len())?;
            args.iter().try_for_each(|a| self.extend_from_term(a))?;
        }
        Ok(())
    }

    /// Adds every symbol used in `f`, rejecting arity conflicts.
    pub fn extend_from_formula(&mut self, f: &Formula) -> Result<(), SignatureError> {
        let mut result = Ok(());
        f.visit(&mut |g| {
            if result.is_err() {
                return;
            }
            result = match g {
                Formula::Eq(s, t) => self
                    .extend_from_term(s)
                    .and_then(|_| self.extend_from_term(t)),
                Formula::Atom(a) => self
                    .add_predicate(&a.pred, a.args.len())
                    .and_then(|_| a.args.iter().try_for_each(|t| self.extend_from_term(t))),
                _ => Ok(()),
            };
        });
        result
    }

    /// Adds a constant if none exists yet: `a`, or the first free name `a1, a2, ...`.
    pub fn ensure_constant(&mut self) {
        if !self.constants().is_empty() {
            return;
        }
        let name = std::iter::once("a".to_string())
            .chain((1..).map(|i| format!("a{i}")))
            .find(|n| {
                !self.functions.contains_key(n.as_str())
                    && !self.predicates.contains_key(n.as_str())
            })
            .expect("infinitely many names");
        self.functions.insert(Arc::from(name.as_str()), 0);
    }

    /// Smallest signature covering `formulas`, with a constant added if needed.
    pub fn infer<'a, I: IntoIterator<Item = &'a Formula>>(
        formulas: I,
    ) -> Result<Signature, SignatureError> {
        let mut sig = Signature::new();
        for f in formulas {
            sig.extend_from_formula(f)?;
        }
        sig.ensure_constant();
        Ok(sig)
    }
}

fn check_name(name: &str) -> Result<(), SignatureError> {
    if RESERVED.contains(&name) {
        return Err(SignatureError::Reserved(name.to_string()));
    }
    Ok(())
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let funs: Vec<String> = self
            .functions
            .iter()
            .map(|(k, a)| format!("{k}/{a}"))
            .collect();
        let preds: Vec<String> = self
            .predicates
            .iter()
            .map(|(k, a)| format!("{k}/{a}"))
            .collect();
        write!(
            f,
            "functions: {}; predicates: {}",
            funs.join(", "),
            preds.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    #[test]
    fn infer_and_check() {
        let f = parse_formula("X = f(a, Y) & p(X)").unwrap();
        let sig = Signature::infer([&f]).unwrap();
        assert_eq!(sig.function_arity("f"), Some(2));
        assert_eq!(sig.predicate_arity("p"), Some(1));
        assert!(sig.check_formula(&f).is_ok());
        let g = parse_formula("X = f(a)").unwrap();
        assert!(matches!(
            sig.check_formula(&g),
            Err(SignatureError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn inference_adds_a_constant() {
        let f = parse_formula("X = f(Y)").unwrap();
        let sig = Signature::infer([&f]).unwrap();
        assert_eq!(sig.constants().len(), 1);
        assert!(sig.validate().is_ok());
    }

    #[test]
    fn clashes_rejected() {
        let f = parse_formula("p(X) & X = p").unwrap();
        assert!(matches!(
            Signature::infer([&f]),
            Err(SignatureError::NameClash(_))
        ));
        let f = parse_formula("X = f(a) & Y = f(a, a)").unwrap();
        assert!(Signature::infer([&f]).is_err());
        assert!(Signature::new().with_function("true", 0).is_err());
    }

    #[test]
    fn unknown_symbols() {
        let sig = Signature::new().with_function("a", 0).unwrap();
        let f = parse_formula("q(a)").unwrap();
        assert_eq!(
            sig.check_formula(&f),
            Err(SignatureError::UnknownPredicate("q".into()))
        );
    }
}
