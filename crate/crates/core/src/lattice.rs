//! E-formulas, the isomorphism Γ with substitutions, and lattice operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Formula, Query};
use crate::parse::{parse_query, SyntaxError};
use crate::solver::{solved_form, SolvedForm};
use crate::subst::Substitution;
use crate::term::Term;
use crate::var::{FreshVars, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("not an E-formula: {0} atoms")]
    HasAtoms(usize),
    #[error("empty argument set")]
    EmptySet,
    #[error("inconsistent E-formula")]
    Inconsistent,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A query without atoms: an existentially quantified system of equations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EFormula(Query);

impl EFormula {
    pub fn new(q: Query) -> Result<EFormula, LatticeError> {
        match q.card() {
            0 => Ok(EFormula(q)),
            n => Err(LatticeError::HasAtoms(n)),
        }
    }

    pub fn truth() -> EFormula {
        EFormula(Query::truth())
    }

    pub fn falsity() -> EFormula {
        EFormula(Query::falsity())
    }

    pub fn from_solved(s: &SolvedForm) -> Result<EFormula, LatticeError> {
        EFormula::new(s.to_query())
    }

    pub fn query(&self) -> &Query {
        &self.0
    }

    pub fn formula(&self) -> &Formula {
        self.0.formula()
    }

    pub fn into_query(self) -> Query {
        self.0
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.0.free_vars()
    }

    pub fn solve(&self) -> SolvedForm {
        solved_form(&self.0)
    }

    pub fn is_consistent(&self) -> bool {
        self.solve().is_consistent()
    }

    pub fn more_general(&self, other: &EFormula) -> bool {
        crate::solver::more_general(&self.0, &other.0)
    }

    pub fn equivalent(&self, other: &EFormula) -> bool {
        crate::solver::equivalent(&self.0, &other.0)
    }

    pub fn and(&self, other: &EFormula) -> EFormula {
        EFormula(Query::and(self.0.clone(), other.0.clone()))
    }
}

impl FromStr for EFormula {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<EFormula, LatticeError> {
        EFormula::new(parse_query(s)?)
    }
}

impl fmt::Display for EFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn canonical(s: &SolvedForm) -> EFormula {
    EFormula::from_solved(&s.canonicalize()).expect("E-formulas solve to E-formulas")
}

/// Γ: solved equations plus identity bindings on the parameters.
pub fn to_substitution(e: &EFormula) -> Substitution {
    solved_to_substitution(&e.solve())
}

pub fn solved_to_substitution(s: &SolvedForm) -> Substitution {
    match s {
        SolvedForm::False => Substitution::Bottom,
        SolvedForm::True => Substitution::empty(),
        SolvedForm::Body(b) => {
            let mut m: BTreeMap<Var, Term> = b.eqns.iter().cloned().collect();
            for y in b.params() {
                m.insert(y.clone(), Term::Var(y));
            }
            Substitution::Bindings(m)
        }
    }
}

/// Γ⁻¹: rename range variables that are also in the domain, then quantify
/// every range variable over the equations `x = σ(x)`.
pub fn to_eformula(sigma: &Substitution) -> EFormula {
    let m = match sigma {
        Substitution::Bottom => return EFormula::falsity(),
        Substitution::Bindings(m) if m.is_empty() => return EFormula::truth(),
        Substitution::Bindings(m) => m,
    };
    let range = sigma.range();
    let mut fresh = FreshVars::avoiding(range.iter().chain(m.keys()).cloned());
    let renaming: BTreeMap<Var, Var> = range
        .iter()
        .filter(|v| m.contains_key(*v))
        .map(|v| (v.clone(), fresh.fresh()))
        .collect();
    let eqs: Vec<Formula> = m
        .iter()
        .map(|(x, t)| Formula::Eq(Term::Var(x.clone()), t.rename(&renaming)))
        .collect();
    let bound: BTreeSet<Var> = range
        .iter()
        .map(|v| renaming.get(v).cloned().unwrap_or_else(|| v.clone()))
        .collect();
    let f = Formula::exists_all(
        &bound.into_iter().collect::<Vec<_>>(),
        Formula::and_all(eqs),
    );
    EFormula(Query::new(f).expect("equations form a query"))
}

/// Greatest lower bound: the solved conjunction.
pub fn meet(e1: &EFormula, e2: &EFormula) -> EFormula {
    canonical(&e1.and(e2).solve())
}

/// Least upper bound, by anti-unification of the two substitutions over their
/// common domain.
pub fn join(e1: &EFormula, e2: &EFormula) -> EFormula {
    let (s1, s2) = (e1.solve(), e2.solve());
    match (&s1, &s2) {
        (SolvedForm::False, _) => return canonical(&s2),
        (_, SolvedForm::False) => return canonical(&s1),
        _ => {}
    }
    let (g1, g2) = (solved_to_substitution(&s1), solved_to_substitution(&s2));
    let dom: BTreeSet<Var> = g1.dom().union(&g2.dom()).cloned().collect();
    let g1 = g1.regular_extension(&dom);
    let g2 = g2.regular_extension(&dom);
    let (m1, m2) = (
        g1.bindings().expect("consistent"),
        g2.bindings().expect("consistent"),
    );

    let mut taken = dom.clone();
    taken.extend(g1.range());
    taken.extend(g2.range());
    let mut names = (1..)
        .map(|i| Var::new(format!("G{i}")))
        .filter(move |v| !taken.contains(v));
    let mut table: BTreeMap<(Term, Term), Var> = BTreeMap::new();
    let theta: BTreeMap<Var, Term> = dom
        .iter()
        .map(|x| (x.clone(), lgg(&m1[x], &m2[x], &mut table, &mut names)))
        .collect();
    canonical(&to_eformula(&Substitution::Bindings(theta)).solve())
}

fn lgg(
    s: &Term,
    t: &Term,
    table: &mut BTreeMap<(Term, Term), Var>,
    names: &mut impl Iterator<Item = Var>,
) -> Term {
    match (s, t) {
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => Term::App(
            f.clone(),
            xs.iter()
                .zip(ys)
                .map(|(a, b)| lgg(a, b, table, names))
                .collect(),
        ),
        _ => {
            let v = table
                .entry((s.clone(), t.clone()))
                .or_insert_with(|| names.next().expect("infinitely many names"));
            Term::Var(v.clone())
        }
    }
}

pub fn meet_all(es: &[EFormula]) -> Result<EFormula, LatticeError> {
    let (first, rest) = es.split_first().ok_or(LatticeError::EmptySet)?;
    Ok(rest
        .iter()
        .fold(canonical(&first.solve()), |acc, e| meet(&acc, e)))
}

pub fn join_all(es: &[EFormula]) -> Result<EFormula, LatticeError> {
    let (first, rest) = es.split_first().ok_or(LatticeError::EmptySet)?;
    Ok(rest
        .iter()
        .fold(canonical(&first.solve()), |acc, e| join(&acc, e)))
}

/// `(∃z̄) E` where `z̄` lists the free variables of `E` outside `xs` in order.
/// An inconsistent `E` projects to `FALSE`.
pub fn project(e: &EFormula, xs: &BTreeSet<Var>) -> EFormula {
    if !e.is_consistent() {
        return EFormula::falsity();
    }
    let outside: Vec<Var> = e
        .free_vars()
        .into_iter()
        .filter(|v| !xs.contains(v))
        .collect();
    EFormula(Query::exists_all(&outside, e.0.clone()))
}

/// Free variables of the solved form.
pub fn kernel_e(e: &EFormula) -> Result<BTreeSet<Var>, LatticeError> {
    match e.solve() {
        SolvedForm::False => Err(LatticeError::Inconsistent),
        s => Ok(s.vars()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_substitution, parse_var_set};

    fn e(s: &str) -> EFormula {
        s.parse().unwrap()
    }

    fn sub(s: &str) -> Substitution {
        parse_substitution(s).unwrap()
    }

    #[test]
    fn rejects_atoms() {
        assert_eq!("p(X)".parse::<EFormula>(), Err(LatticeError::HasAtoms(1)));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(to_substitution(&e("true")), Substitution::empty());
        assert_eq!(to_substitution(&e("X = f(Y)")), sub("{X -> f(Y), Y -> Y}"));
        assert_eq!(to_substitution(&e("X = f(X)")), Substitution::Bottom);
        assert_eq!(to_substitution(&e("false")), Substitution::Bottom);
    }

    #[test]
    fn gamma_inverse_examples() {
        assert_eq!(to_eformula(&Substitution::empty()), EFormula::truth());
        assert_eq!(to_eformula(&Substitution::Bottom), EFormula::falsity());
        let back = to_eformula(&sub("{X -> f(Y), Y -> Y}"));
        assert_eq!(back.to_string(), "exists V0 . X = f(V0) & Y = V0");
        assert!(back.equivalent(&e("X = f(Y)")));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(
            meet(&e("X = f(Y)"), &e("X = f(a)")).to_string(),
            "X = f(a) & Y = a"
        );
        let x = e("exists Z . X = g(Z, Y)");
        assert!(meet(&x, &EFormula::truth()).equivalent(&x));
        assert_eq!(meet(&e("X = a"), &e("X = b")), EFormula::falsity());
    }

    #[test]
    fn join_examples() {
        assert_eq!(
            join(&e("X = f(a)"), &e("X = f(b)")).to_string(),
            "exists B1 . X = f(B1)"
        );
        let x = e("exists Z . X = g(Z, Y) & W = Z");
        assert!(join(&x, &x).equivalent(&x));
        assert_eq!(
            join(&e("exists U . X = f(U, U)"), &e("X = f(a, b)")).to_string(),
            "exists B1 . exists B2 . X = f(B1,B2)"
        );
        assert!(join(&EFormula::falsity(), &x).equivalent(&x));
        assert_eq!(join(&e("X = a"), &e("Y = a")), EFormula::truth());
    }

    #[test]
    fn join_keeps_shared_pairs() {
        assert_eq!(
            join(&e("X = f(a) & Y = a"), &e("X = f(b) & Y = b")).to_string(),
            "X = f(Y)"
        );
    }

    #[test]
    fn folds() {
        let x = e("X = f(Y)");
        assert!(meet_all(std::slice::from_ref(&x)).unwrap().equivalent(&x));
        assert_eq!(
            join_all(&[e("X = a"), e("X = b"), e("X = f(Y)")]).unwrap(),
            EFormula::truth()
        );
        assert_eq!(
            meet_all(&[e("X = a"), e("Y = b")]).unwrap().to_string(),
            "X = a & Y = b"
        );
        assert_eq!(meet_all(&[]), Err(LatticeError::EmptySet));
        assert_eq!(join_all(&[]), Err(LatticeError::EmptySet));
    }

    #[test]
    fn projection_examples() {
        let xs = parse_var_set("X").unwrap();
        assert_eq!(
            project(&e("X = f(Y)"), &xs).to_string(),
            "exists Y . X = f(Y)"
        );
        assert_eq!(project(&EFormula::falsity(), &xs), EFormula::falsity());
        let x = e("X = f(Y) & Z = a");
        assert_eq!(project(&x, &x.free_vars()), x);
    }

    #[test]
    fn kernel_examples() {
        let vs = |s: &str| parse_var_set(s).unwrap();
        assert_eq!(kernel_e(&e("X = f(Y)")).unwrap(), vs("X, Y"));
        assert_eq!(
            kernel_e(&e("exists Z . X = Z & Y = Z")).unwrap(),
            vs("X, Y")
        );
        assert_eq!(kernel_e(&e("X = a & X = a")).unwrap(), vs("X"));
        assert_eq!(kernel_e(&e("X = f(X)")), Err(LatticeError::Inconsistent));
    }
}
