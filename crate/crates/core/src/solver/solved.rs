use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{Formula, Query};
use crate::term::{Atom, Term};
use crate::var::Var;

/// `(∃z̄)(x1 = s1 ∧ ... ∧ xn = sn ∧ A1 ∧ ... ∧ Am)` satisfying the solved-form
/// conditions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SolvedBody {
    pub bound: Vec<Var>,
    pub eqns: Vec<(Var, Term)>,
    pub atoms: Vec<Atom>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SolvedForm {
    True,
    False,
    Body(SolvedBody),
}

impl SolvedBody {
    /// Free variables: eliminable variables and parameters.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for (x, t) in &self.eqns {
            out.insert(x.clone());
            t.collect_vars(&mut out);
        }
        self.atoms.iter().for_each(|a| a.collect_vars(&mut out));
        for z in &self.bound {
            out.remove(z);
        }
        out
    }

    pub fn elim(&self) -> BTreeSet<Var> {
        self.eqns.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn params(&self) -> BTreeSet<Var> {
        let elim = self.elim();
        self.vars()
            .into_iter()
            .filter(|v| !elim.contains(v))
            .collect()
    }

    pub fn bound_set(&self) -> BTreeSet<Var> {
        self.bound.iter().cloned().collect()
    }

    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = self.vars();
        out.extend(self.bound.iter().cloned());
        out
    }

    /// Checks the four solved-form conditions.
    pub fn check(&self) -> Result<(), String> {
        let mut seen = BTreeSet::new();
        for v in self.eqns.iter().map(|(x, _)| x).chain(&self.bound) {
            if !seen.insert(v) {
                return Err(format!("{v} is eliminable or bound twice"));
            }
        }
        let elim = self.elim();
        for (_, t) in &self.eqns {
            if let Some(x) = elim.iter().find(|x| t.occurs(x)) {
                return Err(format!("eliminable {x} occurs in a right-hand side"));
            }
        }
        for a in &self.atoms {
            if let Some(x) = elim.iter().find(|x| a.occurs(x)) {
                return Err(format!("eliminable {x} occurs in an atom"));
            }
        }
        for z in &self.bound {
            let occurs = self.eqns.iter().any(|(_, t)| t.occurs(z))
                || self.atoms.iter().any(|a| a.occurs(z));
            if !occurs {
                return Err(format!("bound {z} does not occur"));
            }
        }
        for (x, t) in &self.eqns {
            if let Term::Var(v) = t {
                if self.bound.contains(v) {
                    return Err(format!("{x} = {v} has a bound right-hand side"));
                }
            }
        }
        if self.eqns.is_empty() && self.atoms.is_empty() {
            return Err("empty body".into());
        }
        Ok(())
    }

    pub fn to_formula(&self) -> Formula {
        let eqs = self
            .eqns
            .iter()
            .map(|(x, t)| Formula::Eq(Term::Var(x.clone()), t.clone()));
        let atoms = self.atoms.iter().map(|a| Formula::Atom(a.clone()));
        Formula::exists_all(&self.bound, Formula::and_all(eqs.chain(atoms)))
    }

    pub fn to_query(&self) -> Query {
        Query::new(self.to_formula()).expect("solved forms are queries")
    }

    /// The equations as a substitution map.
    pub fn equation_map(&self) -> BTreeMap<Var, Term> {
        self.eqns.iter().cloned().collect()
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> SolvedBody {
        let rn = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        SolvedBody {
            bound: self.bound.iter().map(rn).collect(),
            eqns: self
                .eqns
                .iter()
                .map(|(x, t)| (rn(x), t.rename(map)))
                .collect(),
            atoms: self.atoms.iter().map(|a| a.rename(map)).collect(),
        }
    }
}

impl SolvedForm {
    /// Reads a query that is already in solved form. Conjunctions may be
    /// bracketed arbitrarily but equations must precede atoms.
    pub fn from_query(q: &Query) -> Option<SolvedForm> {
        let mut f = q.formula();
        match f {
            Formula::True => return Some(SolvedForm::True),
            Formula::False => return Some(SolvedForm::False),
            _ => {}
        }
        let mut bound = Vec::new();
        while let Formula::Exists(z, g) = f {
            bound.push(z.clone());
            f = g;
        }
        let mut items = Vec::new();
        flatten(f, &mut items);
        let mut eqns = Vec::new();
        let mut atoms = Vec::new();
        for item in items {
            match item {
                Formula::Eq(Term::Var(x), t) if atoms.is_empty() => {
                    eqns.push((x.clone(), t.clone()))
                }
                Formula::Atom(a) => atoms.push(a.clone()),
                _ => return None,
            }
        }
        let body = SolvedBody { bound, eqns, atoms };
        body.check().ok()?;
        Some(SolvedForm::Body(body))
    }

    pub fn body(&self) -> Option<&SolvedBody> {
        match self {
            SolvedForm::Body(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, SolvedForm::False)
    }

    pub fn card(&self) -> usize {
        self.body().map_or(0, |b| b.atoms.len())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.body().map(SolvedBody::vars).unwrap_or_default()
    }

    pub fn elim(&self) -> BTreeSet<Var> {
        self.body().map(SolvedBody::elim).unwrap_or_default()
    }

    pub fn params(&self) -> BTreeSet<Var> {
        self.body().map(SolvedBody::params).unwrap_or_default()
    }

    pub fn bound(&self) -> BTreeSet<Var> {
        self.body().map(SolvedBody::bound_set).unwrap_or_default()
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            SolvedForm::True => Formula::True,
            SolvedForm::False => Formula::False,
            SolvedForm::Body(b) => b.to_formula(),
        }
    }

    pub fn to_query(&self) -> Query {
        Query::new(self.to_formula()).expect("solved forms are queries")
    }

    /// Canonical representative of the isomorphism class: each class of
    /// variables equated to a common parameter is redirected so that the
    /// largest variable is the parameter, equations are sorted by eliminable
    /// variable, and bound variables are renamed `B1, B2, ...` by first
    /// occurrence.
    pub fn canonicalize(&self) -> SolvedForm {
        match self {
            SolvedForm::Body(b) => SolvedForm::Body(canonical_body(b)),
            other => other.clone(),
        }
    }
}

fn flatten<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        other => out.push(other),
    }
}

fn canonical_body(b: &SolvedBody) -> SolvedBody {
    let mut classes: BTreeMap<Var, Vec<Var>> = BTreeMap::new();
    for (x, t) in &b.eqns {
        if let Term::Var(v) = t {
            classes.entry(v.clone()).or_default().push(x.clone());
        }
    }
    let mut swap = BTreeMap::new();
    for (param, members) in classes {
        let top = members.iter().max().expect("nonempty class").clone();
        if top > param {
            swap.insert(top.clone(), param.clone());
            swap.insert(param, top);
        }
    }
    let mut body = b.rename(&swap);
    body.eqns.sort_by(|a, b| a.0.cmp(&b.0));

    let free = body.vars();
    let mut order = Vec::new();
    for (_, t) in &body.eqns {
        t.vars_in_order(&mut order);
    }
    for a in &body.atoms {
        a.args.iter().for_each(|t| t.vars_in_order(&mut order));
    }
    let mut names = (1..)
        .map(|i| Var::new(format!("B{i}")))
        .filter(|v| !free.contains(v));
    let mut rename = BTreeMap::new();
    let mut bound = Vec::new();
    for v in order.into_iter().filter(|v| body.bound.contains(v)) {
        let n = names.next().expect("infinitely many names");
        rename.insert(v, n.clone());
        bound.push(n);
    }
    let mut body = body.rename(&rename);
    body.bound = bound;
    body
}

impl fmt::Display for SolvedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

/// True iff `q` is in solved form.
pub fn is_solved_form(q: &Query) -> bool {
    SolvedForm::from_query(q).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_query;

    fn sf(s: &str) -> Option<SolvedForm> {
        SolvedForm::from_query(&parse_query(s).unwrap())
    }

    #[test]
    fn recognizes_solved_forms() {
        assert_eq!(sf("true"), Some(SolvedForm::True));
        assert!(sf("X = f(Y)").is_some());
        assert!(sf("X = f(X)").is_none());
        assert!(sf("exists Z . X = f(Z) & p(Z)").is_some());
        assert!(sf("exists Z . X = Z").is_none());
        assert!(sf("exists Z . X = a").is_none());
        assert!(sf("X = a & X = b").is_none());
        assert!(sf("p(X) & X = a").is_none());
        assert!(sf("X = a & p(X)").is_none());
        assert!(sf("f(X) = a").is_none());
        assert!(sf("X = a & true").is_none());
    }

    #[test]
    fn variable_sets() {
        let s = sf("exists Z . X = f(Z, Y) & p(W)").unwrap();
        let names = |set: BTreeSet<Var>| set.into_iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(names(s.elim()), ["X"]);
        assert_eq!(names(s.params()), ["Y", "W"]);
        assert_eq!(names(s.bound()), ["Z"]);
        assert_eq!(s.card(), 1);
    }

    #[test]
    fn canonical_redirect() {
        let a = sf("Y = X").unwrap().canonicalize();
        let b = sf("X = Y").unwrap().canonicalize();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "X = Y");
    }

    #[test]
    fn canonical_bound_names() {
        let a = sf("exists Z . exists V1 . X = f(Z, V1)")
            .unwrap()
            .canonicalize();
        let b = sf("exists U . exists V0 . X = f(V0, U)")
            .unwrap()
            .canonicalize();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "exists B1 . exists B2 . X = f(B1,B2)");
    }

    #[test]
    fn canonical_is_idempotent() {
        let s = sf("exists Z . Y = X & U = X & V0 = g(Z, X) & p(Z)").unwrap();
        let c = s.canonicalize();
        assert_eq!(c.canonicalize(), c);
        assert_eq!(
            c.to_string(),
            "exists B1 . X = U & Y = U & V0 = g(B1,U) & p(B1)"
        );
    }
}
