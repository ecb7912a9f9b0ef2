use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::solved::{SolvedBody, SolvedForm};

use crate::diff::{diff_into, diff_pairs};
use crate::formula::Query;
use crate::term::Term;
use crate::var::{FreshVars, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("eliminable variables differ")]
    Eliminable,
    #[error("atom counts differ: {0} vs {1}")]
    AtomCount(usize, usize),
    #[error("inconsistent solved form")]
    Inconsistent,
}

/// Decides `q1 ⪯ q2`: every solution of `q1` is a solution of `q2`, atom by
/// atom, over non-trivial models of the free equality axioms.
pub fn more_general(q1: &Query, q2: &Query) -> bool {
    if q1.card() != q2.card() {
        return false;
    }
    solved_more_general(&super::solved_form(q1), &super::solved_form(q2))
}

/// `q1 ≈ q2`: equal card and isomorphic solved forms.
pub fn equivalent(q1: &Query, q2: &Query) -> bool {
    q1.card() == q2.card()
        && super::solved_form(q1).canonicalize() == super::solved_form(q2).canonicalize()
}

/// `s1 ⪯ s2` on solved forms of equal card. `FALSE` is below everything
/// and `TRUE` above everything.
pub fn solved_more_general(s1: &SolvedForm, s2: &SolvedForm) -> bool {
    match (s1, s2) {
        (SolvedForm::False, _) => true,
        (_, SolvedForm::False) => false,
        (_, SolvedForm::True) => true,
        (SolvedForm::True, SolvedForm::Body(b2)) => body_leq(&SolvedBody::empty(), b2),
        (SolvedForm::Body(b1), SolvedForm::Body(b2)) => body_leq(b1, b2),
    }
}

// Apply the most general solution of b1 to both sides; then b1 ⪯ b2 iff the
// difference pairs only bind the bound variables of b2 consistently and leave
// every other variable fixed.
fn body_leq(b1: &SolvedBody, b2: &SolvedBody) -> bool {
    if b1.atoms.len() != b2.atoms.len() {
        return false;
    }
    let mut taken = b1.all_vars();
    taken.extend(b2.all_vars());
    let mut fresh = FreshVars::avoiding(taken);
    let b1 = rename_bound(b1, &mut fresh);
    let b2 = rename_bound(b2, &mut fresh);
    let sigma = b1.equation_map();
    let pattern = b2.bound_set();

    let mut pairs = Vec::new();
    for (x, t) in &b2.eqns {
        let lhs = sigma
            .get(x)
            .cloned()
            .unwrap_or_else(|| Term::Var(x.clone()));
        diff_pairs(&lhs, &t.substitute(&sigma), &mut pairs);
    }
    for (a, b) in b1.atoms.iter().zip(&b2.atoms) {
        if a.pred != b.pred || a.args.len() != b.args.len() {
            return false;
        }
        for (s, t) in a.args.iter().zip(&b.args) {
            diff_pairs(s, &t.substitute(&sigma), &mut pairs);
        }
    }

    let mut assignment: BTreeMap<Var, Term> = BTreeMap::new();
    for (s, t) in pairs {
        match t {
            Term::Var(v) if pattern.contains(&v) => match assignment.get(&v) {
                Some(prev) if *prev != s => return false,
                Some(_) => {}
                None => {
                    assignment.insert(v, s);
                }
            },
            Term::Var(v) if s == Term::Var(v.clone()) => {}
            _ => return false,
        }
    }
    true
}

fn rename_bound(b: &SolvedBody, fresh: &mut FreshVars) -> SolvedBody {
    let map: BTreeMap<Var, Var> = b.bound.iter().map(|z| (z.clone(), fresh.fresh())).collect();
    b.rename(&map)
}

impl SolvedBody {
    pub fn empty() -> SolvedBody {
        SolvedBody {
            bound: Vec::new(),
            eqns: Vec::new(),
            atoms: Vec::new(),
        }
    }
}

/// `DIFF(S1, S2)`: union of the difference sets of corresponding equation
/// right-hand sides and atom arguments. Needs equal eliminable sets and atom
/// counts. Atoms with different predicates contribute themselves as a pair.
pub fn query_diff(
    s1: &SolvedForm,
    s2: &SolvedForm,
) -> Result<BTreeSet<(Term, Term)>, AlignmentError> {
    let body = |s: &SolvedForm| match s {
        SolvedForm::False => Err(AlignmentError::Inconsistent),
        SolvedForm::True => Ok(SolvedBody::empty()),
        SolvedForm::Body(b) => Ok(b.clone()),
    };
    let (b1, b2) = (body(s1)?, body(s2)?);
    if b1.elim() != b2.elim() {
        return Err(AlignmentError::Eliminable);
    }
    if b1.atoms.len() != b2.atoms.len() {
        return Err(AlignmentError::AtomCount(b1.atoms.len(), b2.atoms.len()));
    }
    let rhs2 = b2.equation_map();
    let mut out = BTreeSet::new();
    for (x, s) in &b1.eqns {
        diff_into(s, &rhs2[x], &mut out);
    }
    for (a, b) in b1.atoms.iter().zip(&b2.atoms) {
        diff_into(&a.as_term(), &b.as_term(), &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_query, parse_term};

    fn q(s: &str) -> Query {
        parse_query(s).unwrap()
    }

    fn leq(a: &str, b: &str) -> bool {
        more_general(&q(a), &q(b))
    }

    #[test]
    fn strict_order_examples() {
        assert!(leq("X = f(a)", "exists V . X = f(V)"));
        assert!(!leq("exists V . X = f(V)", "X = f(a)"));
        assert!(leq(
            "exists U . X = f(U, U)",
            "exists V1 . exists V2 . X = f(V1, V2)"
        ));
        assert!(!leq(
            "exists V1 . exists V2 . X = f(V1, V2)",
            "exists U . X = f(U, U)"
        ));
    }

    #[test]
    fn eliminable_superset() {
        assert!(leq("X = f(a) & Y = a", "X = f(Y)"));
        assert!(!leq("X = f(Y)", "X = f(a) & Y = a"));
        assert!(leq("X = Y", "true"));
        assert!(!leq("true", "X = Y"));
    }

    #[test]
    fn parameters_are_rigid() {
        assert!(!leq("X = f(Y)", "X = f(Z)"));
        assert!(!leq("X = a", "Y = a"));
        assert!(leq("X = Y", "Y = X"));
    }

    #[test]
    fn atoms_align_positionally() {
        assert!(leq("p(a)", "exists Z . p(Z)"));
        assert!(!leq("p(a) & q(b)", "exists Z . q(Z) & p(Z)"));
        assert!(!leq("p(a)", "q(a)"));
        assert!(!leq("p(a)", "p(a) & p(a)"));
        assert!(leq(
            "exists Z . p(Z) & q(Z)",
            "exists Z . exists W . p(Z) & q(W)"
        ));
    }

    #[test]
    fn false_and_card() {
        assert!(leq("a = b", "X = a"));
        assert!(!leq("X = a", "a = b"));
        assert!(leq("a = b & p(X)", "p(Y)"));
        assert!(!leq("a = b & p(X)", "true"));
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&q("exists Z . X = Z & Y = Z"), &q("X = Y")));
        assert!(!equivalent(&q("X = f(a)"), &q("exists V . X = f(V)")));
        let x = q("exists Z . X = g(Z, Y) & p(Z)");
        assert!(equivalent(&x, &x));
        assert!(equivalent(&q("a = b & p(X)"), &q("X = f(X) & q(Y)")));
        assert!(!equivalent(&q("a = b & p(X)"), &q("false")));
    }

    fn pairs(items: &[(&str, &str)]) -> BTreeSet<(Term, Term)> {
        items
            .iter()
            .map(|(a, b)| (parse_term(a).unwrap(), parse_term(b).unwrap()))
            .collect()
    }

    fn sf(s: &str) -> SolvedForm {
        SolvedForm::from_query(&q(s)).unwrap()
    }

    #[test]
    fn diff_examples() {
        assert_eq!(
            query_diff(&sf("X = f(a)"), &sf("exists V . X = f(V)")).unwrap(),
            pairs(&[("a", "V")])
        );
        assert_eq!(
            query_diff(&sf("X = f(Y)"), &sf("X = f(Y)")).unwrap(),
            pairs(&[("Y", "Y")])
        );
        assert_eq!(
            query_diff(
                &sf("exists U . X = f(U, U)"),
                &sf("exists V1 . exists V2 . X = f(V1, V2)")
            )
            .unwrap(),
            pairs(&[("U", "V1"), ("U", "V2")])
        );
        assert_eq!(
            query_diff(&sf("X = a"), &sf("Y = a")),
            Err(AlignmentError::Eliminable)
        );
        assert_eq!(
            query_diff(&sf("p(X)"), &sf("true")),
            Err(AlignmentError::AtomCount(1, 0))
        );
    }
}
