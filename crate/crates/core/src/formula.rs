use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Atom, Term};
use crate::var::Var;

/// A first-order formula with equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplaceError {
    #[error("{term} is not substitutible for {var}")]
    NotSubstitutible { var: Var, term: Term },
    #[error("{vars} variables but {terms} terms")]
    LengthMismatch { vars: usize, terms: usize },
    #[error("variable {0} listed twice")]
    DuplicateVar(Var),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not a query: {0} is not allowed")]
pub struct NotAQuery(pub &'static str);

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    pub fn atom(pred: impl AsRef<str>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: Var, f: Formula) -> Formula {
        Formula::Exists(x, Box::new(f))
    }

    pub fn forall(x: Var, f: Formula) -> Formula {
        Formula::Forall(x, Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `TRUE`.
    pub fn and_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-nested disjunction; the empty disjunction is `FALSE`.
    pub fn or_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// `(∃x1)...(∃xn) f`, with `x1` outermost.
    pub fn exists_all<'a, I>(vars: I, f: Formula) -> Formula
    where
        I: IntoIterator<Item = &'a Var>,
        I::IntoIter: DoubleEndedIterator,
    {
        vars.into_iter()
            .rev()
            .fold(f, |acc, v| Formula::exists(v.clone(), acc))
    }

    pub fn forall_all<'a, I>(vars: I, f: Formula) -> Formula
    where
        I: IntoIterator<Item = &'a Var>,
        I::IntoIter: DoubleEndedIterator,
    {
        vars.into_iter()
            .rev()
            .fold(f, |acc, v| Formula::forall(v.clone(), acc))
    }

    /// Universal closure over the free variables in order.
    pub fn closure(&self) -> Formula {
        let fv = self.free_vars();
        Formula::forall_all(fv.iter().collect::<Vec<_>>(), self.clone())
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let add_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(s, t) => {
                add_term(s, bound, out);
                add_term(t, bound, out);
            }
            Formula::Atom(a) => a.args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, x: &Var) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Eq(s, t) => s.occurs(x) || t.occurs(x),
            Formula::Atom(a) => a.occurs(x),
            Formula::Not(f) => f.is_free(x),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_free(x) || b.is_free(x),
            Formula::Exists(y, f) | Formula::Forall(y, f) => y != x && f.is_free(x),
        }
    }

    /// Every variable occurring anywhere, bound occurrences and binders included.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Eq(s, t) => {
                s.collect_vars(&mut out);
                t.collect_vars(&mut out);
            }
            Formula::Atom(a) => a.collect_vars(&mut out),
            Formula::Exists(x, _) | Formula::Forall(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Variables introduced by some quantifier.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Exists(x, _) | Formula::Forall(x, _) = f {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Pre-order traversal of subformulas.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Number of atom nodes.
    pub fn card(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if let Formula::Atom(_) = f {
                n += 1;
            }
        });
        n
    }

    /// Number of formula nodes plus term sizes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            n += 1 + match f {
                Formula::Eq(s, t) => s.size() + t.size(),
                Formula::Atom(a) => a.args.iter().map(Term::size).sum(),
                _ => 0,
            }
        });
        n
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    /// Returns the first constructor that keeps this from being a query.
    pub fn query_violation(&self) -> Option<&'static str> {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom(_) => None,
            Formula::And(a, b) => a.query_violation().or_else(|| b.query_violation()),
            Formula::Exists(_, f) => f.query_violation(),
            Formula::Not(_) => Some("negation"),
            Formula::Or(..) => Some("disjunction"),
            Formula::Implies(..) => Some("implication"),
            Formula::Iff(..) => Some("equivalence"),
            Formula::Forall(..) => Some("universal quantification"),
        }
    }

    pub fn is_query(&self) -> bool {
        self.query_violation().is_none()
    }

    /// Simultaneous replacement of the free occurrences of `xs[i]` by `ss[i]`.
    ///
    /// Fails if some `ss[i]` would be captured by a quantifier enclosing a free
    /// occurrence of `xs[i]`.
    pub fn replace(&self, xs: &[Var], ss: &[Term]) -> Result<Formula, ReplaceError> {
        if xs.len() != ss.len() {
            return Err(ReplaceError::LengthMismatch {
                vars: xs.len(),
                terms: ss.len(),
            });
        }
        let mut map = BTreeMap::new();
        for (x, s) in xs.iter().zip(ss) {
            if map.insert(x.clone(), s.clone()).is_some() {
                return Err(ReplaceError::DuplicateVar(x.clone()));
            }
        }
        self.replace_map(&map)
    }

    pub fn replace_map(&self, map: &BTreeMap<Var, Term>) -> Result<Formula, ReplaceError> {
        let mut bound = Vec::new();
        self.replace_in(map, &mut bound)
    }

    fn replace_in(
        &self,
        map: &BTreeMap<Var, Term>,
        bound: &mut Vec<Var>,
    ) -> Result<Formula, ReplaceError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        Ok(match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Eq(s, t) => {
                Formula::Eq(replace_term(s, map, bound)?, replace_term(t, map, bound)?)
            }
            Formula::Atom(a) => Formula::Atom(Atom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| replace_term(t, map, bound))
                    .collect::<Result<_, _>>()?,
            }),
            Formula::Not(f) => Formula::not(f.replace_in(map, bound)?),
            Formula::And(a, b) => {
                Formula::and(a.replace_in(map, bound)?, b.replace_in(map, bound)?)
            }
            Formula::Or(a, b) => Formula::or(a.replace_in(map, bound)?, b.replace_in(map, bound)?),
            Formula::Implies(a, b) => {
                Formula::implies(a.replace_in(map, bound)?, b.replace_in(map, bound)?)
            }
            Formula::Iff(a, b) => {
                Formula::iff(a.replace_in(map, bound)?, b.replace_in(map, bound)?)
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                let inner;
                let map = if map.contains_key(x) {
                    let mut m = map.clone();
                    m.remove(x);
                    inner = m;
                    &inner
                } else {
                    map
                };
                bound.push(x.clone());
                let body = f.replace_in(map, bound);
                bound.pop();
                let body = Box::new(body?);
                match self {
                    Formula::Exists(..) => Formula::Exists(x.clone(), body),
                    _ => Formula::Forall(x.clone(), body),
                }
            }
        })
    }

    /// Alpha-equivalence: equal up to renaming of bound variables.
    pub fn is_variant(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

fn replace_term(t: &Term, map: &BTreeMap<Var, Term>, bound: &[Var]) -> Result<Term, ReplaceError> {
    match t {
        Term::Var(x) => match map.get(x) {
            Some(s) => {
                if let Some(_captured) = bound.iter().find(|b| s.occurs(b)) {
                    return Err(ReplaceError::NotSubstitutible {
                        var: x.clone(),
                        term: s.clone(),
                    });
                }
                Ok(s.clone())
            }
            None => Ok(t.clone()),
        },
        Term::App(f, args) => Ok(Term::App(
            f.clone(),
            args.iter()
                .map(|a| replace_term(a, map, bound))
                .collect::<Result<_, _>>()?,
        )),
    }
}

fn term_alpha(s: &Term, t: &Term, env_s: &[Var], env_t: &[Var]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) => {
            match (
                env_s.iter().rposition(|v| v == a),
                env_t.iter().rposition(|v| v == b),
            ) {
                (None, None) => a == b,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| term_alpha(x, y, env_s, env_t))
        }
        _ => false,
    }
}

fn alpha_eq(f: &Formula, g: &Formula, env_f: &mut Vec<Var>, env_g: &mut Vec<Var>) -> bool {
    use Formula::*;
    match (f, g) {
        (True, True) | (False, False) => true,
        (Eq(a, b), Eq(c, d)) => term_alpha(a, c, env_f, env_g) && term_alpha(b, d, env_f, env_g),
        (Atom(a), Atom(b)) => {
            a.pred == b.pred
                && a.args.len() == b.args.len()
                && a.args
                    .iter()
                    .zip(&b.args)
                    .all(|(x, y)| term_alpha(x, y, env_f, env_g))
        }
        (Not(a), Not(b)) => alpha_eq(a, b, env_f, env_g),
        (And(a, b), And(c, d))
        | (Or(a, b), Or(c, d))
        | (Implies(a, b), Implies(c, d))
        | (Iff(a, b), Iff(c, d)) => alpha_eq(a, c, env_f, env_g) && alpha_eq(b, d, env_f, env_g),
        (Exists(x, a), Exists(y, b)) | (Forall(x, a), Forall(y, b)) => {
            env_f.push(x.clone());
            env_g.push(y.clone());
            let r = alpha_eq(a, b, env_f, env_g);
            env_f.pop();
            env_g.pop();
            r
        }
        _ => false,
    }
}

/// A positive conjunctive query: a formula built from `TRUE`, `FALSE`,
/// equations, atoms, `∧` and `∃` only.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Query(Formula);

impl Query {
    pub fn new(f: Formula) -> Result<Query, NotAQuery> {
        match f.query_violation() {
            None => Ok(Query(f)),
            Some(what) => Err(NotAQuery(what)),
        }
    }

    pub fn truth() -> Query {
        Query(Formula::True)
    }

    pub fn falsity() -> Query {
        Query(Formula::False)
    }

    pub fn eq(s: Term, t: Term) -> Query {
        Query(Formula::Eq(s, t))
    }

    pub fn atom(a: Atom) -> Query {
        Query(Formula::Atom(a))
    }

    pub fn and(a: Query, b: Query) -> Query {
        Query(Formula::and(a.0, b.0))
    }

    pub fn and_all<I: IntoIterator<Item = Query>>(items: I) -> Query {
        Query(Formula::and_all(items.into_iter().map(|q| q.0)))
    }

    pub fn exists(x: Var, q: Query) -> Query {
        Query(Formula::exists(x, q.0))
    }

    pub fn exists_all<'a, I>(vars: I, q: Query) -> Query
    where
        I: IntoIterator<Item = &'a Var>,
        I::IntoIter: DoubleEndedIterator,
    {
        Query(Formula::exists_all(vars, q.0))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn card(&self) -> usize {
        self.0.card()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.0.free_vars()
    }

    pub fn bound_vars(&self) -> BTreeSet<Var> {
        self.0.bound_vars()
    }

    pub fn all_vars(&self) -> BTreeSet<Var> {
        self.0.all_vars()
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    /// True for E-formulas: queries without atoms.
    pub fn is_empty_query(&self) -> bool {
        self.card() == 0
    }

    pub fn is_variant(&self, other: &Query) -> bool {
        self.0.is_variant(&other.0)
    }
}

impl From<Query> for Formula {
    fn from(q: Query) -> Formula {
        q.0
    }
}

impl TryFrom<Formula> for Query {
    type Error = NotAQuery;

    fn try_from(f: Formula) -> Result<Query, NotAQuery> {
        Query::new(f)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_term};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn vars(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|n| Var::new(*n)).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(p("X = f(Y)").free_vars(), vars(&["X", "Y"]));
        assert_eq!(p("exists Z . p(X, Y, Z)").free_vars(), vars(&["X", "Y"]));
        assert!(Formula::True.free_vars().is_empty());
    }

    #[test]
    fn replace_examples() {
        let x = Var::new("X");
        let y = Var::new("Y");
        let r = p("X = Y").replace(std::slice::from_ref(&x), &[parse_term("f(Y)").unwrap()]);
        assert_eq!(r.unwrap(), p("f(Y) = Y"));

        let r = p("exists Z . p(X, Z)")
            .replace(std::slice::from_ref(&x), &[parse_term("g(Z)").unwrap()]);
        assert!(matches!(r, Err(ReplaceError::NotSubstitutible { .. })));

        let r = p("X = a & Y = b").replace(&[x, y], &[Term::var("Y"), Term::var("X")]);
        assert_eq!(r.unwrap(), p("Y = a & X = b"));
    }

    #[test]
    fn replace_skips_bound_occurrences() {
        let r = p("exists X . p(X)").replace(&[Var::new("X")], &[Term::constant("a")]);
        assert_eq!(r.unwrap(), p("exists X . p(X)"));
        // capture only matters where the replaced variable actually occurs
        let r = p("p(X) & exists Z . q(Z)").replace(&[Var::new("X")], &[Term::var("Z")]);
        assert_eq!(r.unwrap(), p("p(Z) & exists Z . q(Z)"));
    }

    #[test]
    fn variants() {
        assert!(p("exists Z . p(X, Z)").is_variant(&p("exists U . p(X, U)")));
        assert!(!p("exists Z . p(X, Z)").is_variant(&p("exists Z . p(Y, Z)")));
        let f = p("forall X . exists Y . q(X, Y) -> X = Y");
        assert!(f.is_variant(&f));
        assert!(!p("exists Z . exists U . p(Z, U)").is_variant(&p("exists Z . exists U . p(U, Z)")));
        assert!(!p("exists Z . p(Z)").is_variant(&p("exists U . p(Z)")));
    }

    #[test]
    fn query_restriction() {
        assert!(Query::new(p("exists Z . X = Z & p(Z)")).is_ok());
        assert!(Query::new(p("~p(X)")).is_err());
        assert!(Query::new(p("forall X . p(X)")).is_err());
        assert_eq!(
            Query::new(p("p(X) & exists Y . q(Y) & p(Y)"))
                .unwrap()
                .card(),
            3
        );
    }
}
